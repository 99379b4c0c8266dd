// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/LU>

#include "helmscat/geom.hpp"

namespace helmscat
{

enum class BcKind
{
    dirichlet,
    neumann,
    impedance
};

std::string to_string(BcKind kind);
BcKind parse_bc_kind(const std::string &name);

/// u = 0, u_N = 0, or u_N + h u = 0 on the boundary.
struct BoundaryCondition
{
    BcKind kind = BcKind::dirichlet;
    cplx h{};

    static BoundaryCondition dirichlet() { return {}; }
    static BoundaryCondition neumann() { return {BcKind::neumann, {}}; }
    /// Throws DomainError for Im h < 0.
    static BoundaryCondition impedance(cplx h);

    std::string describe() const;
};

struct PlaneWave
{
    Vec3 direction;
};

struct PointSource
{
    Vec3 position;
};

/// Incident field: plane wave e^{ik alpha.x} or free-space point source
/// g(x, y0).
class Incidence
{
public:
    /// Throws DomainError unless |alpha| = 1 to 1e-8; stored renormalized.
    static Incidence plane_wave(const Vec3 &alpha);
    static Incidence point_source(const Vec3 &y0);

    bool is_plane_wave() const { return std::holds_alternative<PlaneWave>(v_); }
    const Vec3 &direction() const { return std::get<PlaneWave>(v_).direction; }
    const Vec3 &source() const { return std::get<PointSource>(v_).position; }

    cplx field(const Vec3 &x, double k) const;
    CVec3 gradient(const Vec3 &x, double k) const;
    cplx normal_derivative(const Vec3 &x, const Vec3 &normal, double k) const
    {
        return gradient(x, k).cwiseProduct(normal.cast<cplx>()).sum();
    }

    std::string describe() const;

private:
    explicit Incidence(std::variant<PlaneWave, PointSource> v) : v_(std::move(v)) {}
    std::variant<PlaneWave, PointSource> v_;
};

struct SolverOptions
{
    /// Rotated polar rule around each target; 0 picks a default tied to the
    /// surface grid.
    int polar_theta = 0;
    int polar_phi = 0;
    double tolerance = 1e-10;
    std::size_t max_nodes = 6000;
    /// Condition estimates above this raise a resonance warning.
    double condition_threshold = 1e4;
    /// Relative half-width of the Bessel-zero band checked for spheres.
    double resonance_band = 0.02;
};

/// Discrete second-kind operator of the chosen formulation:
///   Dirichlet:           (I/2 + K') u_N        = d_N u_inc
///   Neumann, impedance:  (I/2 - K - h S) u     = u_inc
/// with S, K, K' the single-layer, double-layer and adjoint double-layer
/// operators. Self-interactions use a rotated polar rule on the parameter
/// sphere with spherical-harmonic interpolation of the density.
MatC assemble_matrix(const QuadSurface &surface, const BoundaryCondition &bc, Wavenumber k,
                     const SolverOptions &opts = {});

/// Polar rule sizes actually used for a given surface grid and options.
std::pair<int, int> polar_rule_size(const QuadSurface &surface, const SolverOptions &opts);

struct BoundarySolution
{
    std::shared_ptr<const QuadSurface> surface;
    BoundaryCondition bc;
    Incidence incidence = Incidence::plane_wave({0.0, 0.0, 1.0});
    double k = 0.0;
    /// u_N for Dirichlet, the u-trace otherwise.
    VecC density;
    double residual = 0.0;            // relative linear-system residual
    double condition_estimate = 0.0;  // 1-norm estimate
    std::vector<std::string> warnings;

    /// Total field on the boundary at node j.
    cplx u_trace(std::size_t j) const;
    /// Total normal derivative on the boundary at node j.
    cplx un_trace(std::size_t j) const;
};

/// Factorized boundary operator for repeated solves on one geometry.
class BoundaryOperator
{
public:
    BoundaryOperator(std::shared_ptr<const QuadSurface> surface, const BoundaryCondition &bc, Wavenumber k,
                     const SolverOptions &opts = {});
    BoundaryOperator(const QuadSurface &surface, const BoundaryCondition &bc, Wavenumber k,
                     const SolverOptions &opts = {})
        : BoundaryOperator(std::make_shared<const QuadSurface>(surface), bc, k, opts)
    {
    }

    /// Throws GeometryError for point sources inside or within one panel
    /// diameter of the surface.
    BoundarySolution solve(const Incidence &inc) const;

    VecC rhs(const Incidence &inc) const;
    /// LU solve plus one step of iterative refinement.
    VecC solve_rhs(const VecC &b, double *residual = nullptr) const;

    const MatC &matrix() const { return a_; }
    double condition_estimate() const { return cond_; }
    const std::shared_ptr<const QuadSurface> &surface() const { return surface_; }
    const BoundaryCondition &bc() const { return bc_; }
    double k() const { return k_; }
    const std::vector<std::string> &warnings() const { return warnings_; }

private:
    std::shared_ptr<const QuadSurface> surface_;
    BoundaryCondition bc_;
    double k_;
    SolverOptions opts_;
    MatC a_;
    Eigen::PartialPivLU<MatC> lu_;
    double cond_ = 0.0;
    std::vector<std::string> warnings_;
};

BoundarySolution solve_scattering(const QuadSurface &surface, const BoundaryCondition &bc,
                                  const Incidence &inc, Wavenumber k, const SolverOptions &opts = {});

struct ResonanceAdvisory
{
    bool warning = false;
    std::string message;
    /// For spheres: the Bessel-zero size parameter that triggered, if any.
    std::optional<double> nearest_zero;
    /// For other shapes: condition estimate of the monitor matrix.
    std::optional<double> condition_estimate;
};

/// Sphere: compares k * radius against zeros of j_l (formulations for
/// Neumann/impedance) and j_l' (Dirichlet); without a boundary condition
/// both families are checked. Other shapes: condition estimate of the
/// operator on a coarse monitor grid.
ResonanceAdvisory interior_resonance_guard(const SurfaceSpec &spec, Wavenumber k,
                                           std::optional<BoundaryCondition> bc = std::nullopt,
                                           const SolverOptions &opts = {}, int monitor_theta = 12,
                                           int monitor_phi = 24);

/// Number of worker threads used by assembly and field sweeps.
int worker_threads();

} // namespace helmscat
