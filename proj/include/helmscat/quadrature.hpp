// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include <vector>

#include "helmscat/common.hpp"

namespace helmscat
{

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre
{
    std::vector<double> nodes;   // ascending
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

/// Tensor product rule on the unit sphere: Gauss-Legendre in cos(theta),
/// trapezoid in phi. Index j = a * n_phi + b.
struct SphereGrid
{
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> theta;  // per node
    std::vector<double> phi;    // per node
    std::vector<Vec3> directions;
    std::vector<double> weights; // solid-angle weights, sum 4pi

    std::size_t size() const { return directions.size(); }
};

SphereGrid sphere_grid(int n_theta, int n_phi);

} // namespace helmscat
