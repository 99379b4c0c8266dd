// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include <span>
#include <vector>

#include "helmscat/fields.hpp"
#include "helmscat/solver.hpp"

namespace helmscat
{

/// Reflection coefficients c_l of a sphere centered at the origin: the
/// scattered field of e^{ik alpha.x} is sum_l i^l (2l+1) c_l h_l(kr) P_l.
struct PartialWaveCoeffs
{
    double ka = 0.0;
    BoundaryCondition bc;
    int l_max = 0;
    std::vector<cplx> coeffs;
};

/// Truncation ka + 15 + 3 (ka)^{1/3}, extended until the tail coefficient
/// drops below 1e-14. Throws DomainError for ka > 40 or Im h < 0.
PartialWaveCoeffs partial_wave_coeffs(double radius, const BoundaryCondition &bc, Wavenumber k);

/// A(beta) = (-i/k) sum_l (2l+1) c_l P_l(beta.alpha) for a sphere centered at
/// the origin.
cplx mie_amplitude(const PartialWaveCoeffs &c, double k, const Vec3 &alpha, const Vec3 &beta);

FarFieldPattern mie_far_field(double radius, const BoundaryCondition &bc, Wavenumber k, const Vec3 &alpha,
                              const SphereGrid &grid);
FarFieldPattern mie_far_field(double radius, const BoundaryCondition &bc, Wavenumber k, const Vec3 &alpha,
                              std::span<const Vec3> directions);

/// Total field u and its radial derivative at |x| >= radius.
struct MieField
{
    cplx u;
    cplx u_r;
};
MieField mie_total_field(double radius, const BoundaryCondition &bc, Wavenumber k, const Vec3 &alpha,
                         const Vec3 &x);

/// Obstacle Green's function of the sphere (Dirichlet unless told otherwise)
/// as free kernel plus bilinear partial-wave series. Converges for any pair of
/// distinct exterior points; throws DomainError if more than 20000 terms
/// would be needed.
cplx sphere_greens(double radius, Wavenumber k, const Vec3 &x, const Vec3 &y,
                   const BoundaryCondition &bc = BoundaryCondition::dirichlet());

/// Radiating solution h_l(k|x|) Y_lm(x) / h_l(k radius) of the exterior
/// problem whose Dirichlet trace on the sphere is the complex harmonic Y_lm.
cplx sphere_multipole(double radius, Wavenumber k, int l, int m, const Vec3 &x);

} // namespace helmscat
