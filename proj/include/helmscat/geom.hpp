// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "helmscat/common.hpp"
#include "helmscat/mathfn.hpp"

namespace helmscat
{

inline constexpr int default_geometry_degree = 8;

/// Point on a surface with its outward unit normal and the area element per
/// unit solid angle of the parameter sphere.
struct SurfacePoint
{
    Vec3 point;
    Vec3 normal;
    double jacobian = 0.0;
    double radius = 0.0;
};

/// Closed star-shaped surface x(p) = center + r(p) p, p on the unit sphere,
/// with r expanded in real orthonormal spherical harmonics.
///
/// Real harmonics follow the convention of real_sph_harmonic: index
/// sh_index(l, m), m > 0 the cosine branch, m < 0 the sine branch.
class SurfaceSpec
{
public:
    /// Throws GeometryError if c00 <= 0, the coefficient count does not match
    /// the degree, or r <= 0 anywhere on a check grid.
    SurfaceSpec(std::string label, Vec3 center, int degree, std::vector<double> coeffs);

    /// Least-squares projection of an arbitrary positive radius function.
    static SurfaceSpec from_radius_function(std::string label, Vec3 center, int degree,
                                            const std::function<double(const Vec3 &)> &radius);

    const std::string &label() const { return label_; }
    const Vec3 &center() const { return center_; }
    int degree() const { return degree_; }
    const std::vector<double> &coeffs() const { return coeffs_; }
    double coeff(int l, int m) const;

    /// Highest degree with a nonzero coefficient.
    int effective_degree() const { return effective_degree_; }

    double radius(const Vec3 &dir) const;
    double radius(double theta, double phi) const { return radius(direction(theta, phi)); }

    /// Point, analytic normal, and Jacobian at parameter direction `dir`.
    SurfacePoint evaluate(const Vec3 &dir) const;

    /// Same, reusing a Legendre table already computed (with derivatives) at
    /// `dir` for degree >= effective_degree() + 1.
    SurfacePoint evaluate(const Vec3 &dir, const AssociatedLegendre &table, double cos_p, double sin_p) const;

    /// |x - center| - r(direction of x - center); negative inside.
    double radial_gap(const Vec3 &x) const;
    bool contains(const Vec3 &x) const { return radial_gap(x) < 0.0; }

    bool is_sphere() const { return effective_degree_ == 0; }
    /// Radius of the sphere with the same c00.
    double mean_radius() const { return coeffs_[0] / std::sqrt(4.0 * pi); }
    /// Maximum/minimum of r over a dense check grid.
    double max_radius() const { return r_max_; }
    double min_radius() const { return r_min_; }

    SurfaceSpec translated(const Vec3 &shift) const;
    SurfaceSpec with_coeffs(std::vector<double> coeffs) const;
    SurfaceSpec with_label(std::string label) const;

private:
    std::string label_;
    Vec3 center_;
    int degree_;
    std::vector<double> coeffs_;
    int effective_degree_ = 0;
    double r_min_ = 0.0, r_max_ = 0.0;
};

/// Sphere of the given radius; all coefficients except c00 vanish.
SurfaceSpec make_sphere(double radius, const Vec3 &center = Vec3::Zero(), int degree = default_geometry_degree);

/// Spheroid with equatorial semi-axis a and polar semi-axis c, projected onto
/// harmonics of the given degree (axisymmetric, so only m = 0 terms).
SurfaceSpec make_spheroid(double a, double c, const Vec3 &center = Vec3::Zero(), int degree = 16);

/// r = r0 + sum of (l, m, amplitude) real-harmonic perturbations.
struct HarmonicBump
{
    int l, m;
    double amplitude;
};
SurfaceSpec make_perturbed_sphere(double r0, std::initializer_list<HarmonicBump> bumps,
                                  const Vec3 &center = Vec3::Zero(), int degree = default_geometry_degree);

/// Closed-form area of a spheroid (a equatorial, c polar).
double spheroid_area(double a, double c);

/// Nystrom discretization of a surface: Gauss-Legendre in cos(theta) times
/// trapezoid in phi on the parameter sphere, pushed forward through r.
struct QuadSurface
{
    SurfaceSpec spec;
    int n_theta = 0;
    int n_phi = 0;
    std::vector<Vec3> directions;      // parameter directions p_j
    std::vector<double> solid_weights; // parameter-sphere weights, sum 4pi
    std::vector<Vec3> nodes;
    std::vector<Vec3> normals;
    std::vector<double> jacobians;
    std::vector<double> weights;       // area weights (solid weight * jacobian)
    double panel_diameter = 0.0;       // largest local node spacing

    std::size_t size() const { return nodes.size(); }
    double area() const;
    Vec3 centroid() const;
    /// Distance from x to the nearest node.
    double node_distance(const Vec3 &x) const;
};

QuadSurface discretize(const SurfaceSpec &spec, int n_theta, int n_phi);

} // namespace helmscat
