// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "helmscat/quadrature.hpp"
#include "helmscat/solver.hpp"

namespace helmscat
{

/// Sampled far-field amplitude A(beta) where v ~ A e^{ikr} / r. Patterns on a
/// tensor grid carry its quadrature weights; patterns on a bare direction
/// list have empty weights and zero grid dims.
struct FarFieldPattern
{
    double k = 0.0;
    std::optional<Vec3> alpha;
    int n_theta = 0;
    int n_phi = 0;
    std::vector<Vec3> directions;
    std::vector<double> weights;
    std::vector<cplx> values;

    std::size_t size() const { return values.size(); }
    bool has_grid() const { return !weights.empty(); }
    /// Integral of |A|^2 over the sphere of directions.
    double norm_squared() const;
};

/// sqrt(sum w |a - b|^2) / sqrt(sum w |b|^2); plain sums without a grid.
/// Throws DomainError when the direction sets differ.
double relative_l2(const FarFieldPattern &a, const FarFieldPattern &b);
double relative_l2(std::span<const cplx> a, std::span<const cplx> b, std::span<const double> w = {});

/// How eval_* treat points near or inside the obstacle.
enum class PointCheck
{
    strict,   // throw inside, warn closer than one panel diameter
    unchecked
};

/// Scattered field v(x) = integral [u d_N g(x,s) - u_N g(x,s)] ds over the
/// total-field traces, evaluated with the surface rule. The incident part
/// drops out because it is regular inside the obstacle.
cplx eval_scattered(const BoundarySolution &sol, const Vec3 &x, PointCheck check = PointCheck::strict);
cplx eval_total(const BoundarySolution &sol, const Vec3 &x, PointCheck check = PointCheck::strict);
CVec3 eval_scattered_gradient(const BoundarySolution &sol, const Vec3 &x, PointCheck check = PointCheck::strict);

/// Batched evaluation, parallel over points; results in input order.
std::vector<cplx> eval_scattered(const BoundarySolution &sol, std::span<const Vec3> xs,
                                 PointCheck check = PointCheck::strict);
std::vector<cplx> eval_total(const BoundarySolution &sol, std::span<const Vec3> xs,
                             PointCheck check = PointCheck::strict);

/// Far-field amplitude by the far-field kernel substituted in the
/// representation: A = (1/4pi) integral [u d_N e^{-ik beta.s} - u_N e^{-ik beta.s}] ds.
cplx far_field_value(const BoundarySolution &sol, const Vec3 &beta);
FarFieldPattern far_field(const BoundarySolution &sol, const SphereGrid &grid);
FarFieldPattern far_field(const BoundarySolution &sol, std::span<const Vec3> directions);

/// Throws GeometryError inside the obstacle; returns true if closer to the
/// surface than one panel diameter.
bool near_surface(const QuadSurface &q, const Vec3 &x);

// ---------------------------------------------------------------------------

struct GreensSample
{
    Vec3 x;
    Vec3 y;
    cplx value;
};

/// Obstacle Green's function G(x, y) = g(x, y) + scattered part of the solve
/// sourced at y. Keeps one factorization for many source points.
class GreensFunction
{
public:
    GreensFunction(const SurfaceSpec &spec, const BoundaryCondition &bc, Wavenumber k, int n_theta, int n_phi,
                   const SolverOptions &opts = {});

    GreensSample operator()(const Vec3 &x, const Vec3 &y) const;
    /// Boundary solution with source at y.
    BoundarySolution source_solution(const Vec3 &y) const;
    const BoundaryOperator &op() const { return op_; }

private:
    BoundaryOperator op_;
};

GreensSample greens_function(const SurfaceSpec &spec, const BoundaryCondition &bc, Wavenumber k, const Vec3 &x,
                             const Vec3 &y, int n_theta = 24, int n_phi = 48, const SolverOptions &opts = {});

struct SourceLimitSnapshot
{
    double tau = 0.0;
    Vec3 source;
    std::vector<cplx> greens;       // G(x_j, y)
    std::vector<cplx> renormalized; // G(x_j, y) / g(|y|)
};

/// Point sources y = -tau alpha0 + eta for increasing tau; each snapshot holds
/// G at the probes and G / g(|y|), which approaches u(x, alpha0).
std::vector<SourceLimitSnapshot> scattering_solution_from_source_limit(const GreensFunction &green,
                                                                       const Vec3 &alpha0,
                                                                       std::span<const double> taus, const Vec3 &eta,
                                                                       std::span<const Vec3> probes);

} // namespace helmscat
