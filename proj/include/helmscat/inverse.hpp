// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "helmscat/fields.hpp"

namespace helmscat
{

/// Shape recovery from far-field data at one fixed incident direction and
/// wavenumber. Unknowns are the radius coefficients c_lm, l <= degree.
struct InversionConfig
{
    double k0 = 1.0;
    Vec3 alpha0{0.0, 0.0, 1.0};
    FarFieldPattern data;
    int degree = 2;
    double lambda = 1e-6;          // Tikhonov weight on |c - c_init|^2
    int max_iterations = 30;
    double misfit_tolerance = 1e-8;
    double step_tolerance = 1e-10;
    double fd_step = 1e-4;
    double initial_damping = 1e-3;
    BoundaryCondition bc;          // hypothesis held fixed during shape iterations
    int n_theta = 12;              // forward grid
    int n_phi = 24;
    /// Cap data is first extended to the whole sphere with a fit of this degree.
    int continuation_degree = 8;
    SolverOptions solver;
};

struct BcClassification
{
    BoundaryCondition selected;
    std::map<std::string, double> misfits; // per hypothesis
    std::optional<cplx> fitted_h;          // best impedance found
    double gap = 0.0;                      // second-best minus best misfit
    double noise_floor = 0.0;              // best misfit
    bool ambiguous = false;                // gap below 10x the noise floor
};

struct InversionResult
{
    SurfaceSpec surface;
    BoundaryCondition bc;
    /// sqrt(misfit^2 + lambda |c - c_init|^2) initially and after each accepted step
    std::vector<double> misfit_trace;
    double misfit = 0.0;               // relative data misfit
    int iterations = 0;
    bool converged = false;
    std::string stop_reason;
    double lambda = 0.0;
    std::optional<BcClassification> classification;
    /// Fit condition number when the data had to be continued from a cap.
    std::optional<double> continuation_condition;
};

/// Far field of `spec` at the given directions.
FarFieldPattern forward_pattern(const SurfaceSpec &spec, const BoundaryCondition &bc, Wavenumber k,
                                const Vec3 &alpha, std::span<const Vec3> directions, int n_theta, int n_phi,
                                const SolverOptions &opts = {});

/// Multiplies each sample by (1 + level * z), z standard complex normal
/// drawn from a generator seeded with `seed`. level = 0 returns the input.
FarFieldPattern add_multiplicative_noise(const FarFieldPattern &p, double level, std::uint64_t seed);

/// Relative weighted L2 distance of a model pattern from data on the same
/// directions.
double data_misfit(const FarFieldPattern &model, const FarFieldPattern &data);

/// Data-residual Jacobian d(A(beta_j)) / d(c_lm) for the coefficients
/// l <= degree by central differences; columns are computed in parallel.
MatC pattern_jacobian(const SurfaceSpec &spec, const InversionConfig &cfg, double step);

/// True if the weights integrate to less than the whole sphere.
bool is_cap_data(const FarFieldPattern &data);

/// Least-squares spherical-harmonic extension of cap data onto a full grid;
/// the fit condition number goes to *condition.
FarFieldPattern extend_to_sphere(const FarFieldPattern &cap, int degree, const SphereGrid &grid,
                                 double *condition = nullptr);

/// Levenberg-Marquardt on the radius coefficients. Steps that break
/// star-shapedness are rejected and the damping raised.
InversionResult reconstruct_shape(const InversionConfig &cfg, const SurfaceSpec &initial);

/// Forward solves under Dirichlet, Neumann, and impedance with h fitted by
/// Nelder-Mead over Re h, Im h (Im h >= 0, |h| <= h_max); smallest misfit
/// wins. When ambiguous between Neumann and impedance the Neumann
/// hypothesis is reported.
BcClassification classify_boundary_condition(const SurfaceSpec &surface, const FarFieldPattern &data, Wavenumber k0,
                                             const Vec3 &alpha0, int n_theta = 12, int n_phi = 24,
                                             double h_max = 50.0, const SolverOptions &opts = {});

struct DiscrepancyReport
{
    std::string arrangement;
    double complex_distance = 0.0; // relative L2 between A1 and A2
    double modulus_distance = 0.0; // same for |A1|, |A2|
    double noise_floor = 0.0;      // grid-refinement change of A1
    bool distinct = false;         // complex_distance > 10 x noise_floor
    /// Nested only: min |u1| over the outer surface, u1 the inner obstacle's
    /// scattering solution. Vanishing would make the patterns agree.
    std::optional<double> min_abs_u;
};

/// Throws GeometryError if the obstacles overlap (identical inputs allowed).
DiscrepancyReport discriminate_disjoint(const SurfaceSpec &spec1, const SurfaceSpec &spec2, Wavenumber k0,
                                        const Vec3 &alpha0, const BoundaryCondition &bc = {}, int n_theta = 16,
                                        int n_phi = 32, const SolverOptions &opts = {});

/// Throws GeometryError unless inner lies strictly inside outer.
DiscrepancyReport discriminate_nested(const SurfaceSpec &inner, const SurfaceSpec &outer, Wavenumber k0,
                                      const Vec3 &alpha0, const BoundaryCondition &bc = {}, int n_theta = 16,
                                      int n_phi = 32, const SolverOptions &opts = {});

} // namespace helmscat
