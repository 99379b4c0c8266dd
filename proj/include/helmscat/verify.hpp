// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "helmscat/fields.hpp"

namespace helmscat
{

/// Outcome of one numerical identity check. pass == (residual <= tolerance).
struct IdentityReport
{
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::map<std::string, std::string> meta;   // grids, shapes, notes
    std::map<std::string, double> values;      // auxiliary numbers

    IdentityReport() = default;
    IdentityReport(std::string name, double residual, double tolerance)
        : name(std::move(name)), residual(residual), tolerance(tolerance), pass(residual <= tolerance)
    {
    }
};

struct GridSize
{
    int n_theta = 16;
    int n_phi = 32;
    std::string str() const { return "(" + std::to_string(n_theta) + "," + std::to_string(n_phi) + ")"; }
};

/// Least-squares slope of log(values) against log(abscissae).
double fitted_exponent(std::span<const double> abscissae, std::span<const double> values);

/// Gauss-Legendre x trapezoid rule on the cap of half-angle theta_max around
/// `axis`; weights integrate over the cap.
SphereGrid cap_grid(const Vec3 &axis, double theta_max, int n_theta, int n_phi);

// ---------------------------------------------------------------------------
// individual checks
// ---------------------------------------------------------------------------

/// Relative L2 far-field error of the boundary solver against the series
/// solution for a sphere centered at the origin.
IdentityReport check_oracle_agreement(double radius, const BoundaryCondition &bc, Wavenumber k, const Vec3 &alpha,
                                      GridSize grid, double tol, const SolverOptions &opts = {});

/// max over pairs |A(-alpha,-beta) - A(beta,alpha)| / max |A|.
IdentityReport check_reciprocity(const SurfaceSpec &spec, const BoundaryCondition &bc, Wavenumber k,
                                 std::span<const std::pair<Vec3, Vec3>> pairs, GridSize grid, double tol,
                                 const SolverOptions &opts = {});

/// Deterministic pseudo-random unit-vector pairs (alpha, beta).
std::vector<std::pair<Vec3, Vec3>> random_direction_pairs(int count, unsigned seed);

/// Two reports: "<name>.exponent" (fitted decay of max_j |G(x_j,y) - g(|y|)
/// u(x_j)| against |y|, tolerance -1.8) and "<name>.terminal" (relative
/// error of G/g(|y|) against u at the largest tau).
std::vector<IdentityReport> check_lemma1(const SurfaceSpec &spec, const BoundaryCondition &bc, Wavenumber k,
                                         const Vec3 &alpha0, const Vec3 &eta, std::span<const Vec3> probes,
                                         std::span<const double> taus, GridSize grid, double terminal_tol,
                                         const SolverOptions &opts = {}, const std::string &name = "lemma1");

enum class PairArrangement
{
    disjoint,
    nested
};

/// 4pi [A1(beta,alpha) - A2(beta,alpha)] against the integral over the union
/// boundary of u1(s,alpha) u2N(s,-beta) - u1N(s,alpha) u2(s,-beta), both
/// obstacles Dirichlet. Residual relative to max |LHS|, or absolute when the
/// two obstacles coincide.
IdentityReport check_lemma2(const SurfaceSpec &spec1, const SurfaceSpec &spec2, PairArrangement arrangement,
                            Wavenumber k, const Vec3 &alpha, const SphereGrid &betas, GridSize grid, double tol,
                            const SolverOptions &opts = {});

/// Boundary trace of W(x) = integral G_N(x,s) f(s) ds on a Dirichlet obstacle
/// as x approaches t = point at parameter direction `at` along `ray`.
///
/// The residual is |W(0) - f(t)| / max|f|, where W(0) is extrapolated from
/// probes at clearances of 2 to 3 panel diameters; the raw error at two
/// panel diameters and the per-clearance errors are reported as values.
IdentityReport check_lemma5_trace(const SurfaceSpec &spec, Wavenumber k, const std::function<cplx(const Vec3 &)> &f,
                                  const Vec3 &at, const Vec3 &ray, GridSize grid, double tol,
                                  const SolverOptions &opts = {}, const std::string &name = "lemma5.trace");

/// W(x) against a known radiating solution w with trace f = w|_S at exterior
/// probes; relative max error.
IdentityReport check_lemma5_representation(const SurfaceSpec &spec, Wavenumber k,
                                           const std::function<cplx(const Vec3 &)> &w, std::span<const Vec3> probes,
                                           GridSize grid, double tol, const SolverOptions &opts = {});

/// Fit a degree-L expansion on cap samples, compare with full-sphere data.
/// Residual is max error / max |reference|; the fit condition number is
/// reported and meta["trustworthy"] says whether it stayed below cond_limit.
IdentityReport check_continuation(const FarFieldPattern &cap_data, const FarFieldPattern &reference, int degree,
                                  double tol, double cond_limit = 1e10, const std::string &name = "continuation");

/// Flux of |v|^2 over the sphere of radius r against the integral of |A|^2.
IdentityReport check_flux_limit(const BoundarySolution &sol, double r, const SphereGrid &grid, double tol);
/// Fitted decay exponent of max |dv/dr - ik v| over the radii.
IdentityReport check_radiation(const BoundarySolution &sol, std::span<const double> radii,
                               std::span<const Vec3> directions, double exponent_tol = -1.8);
/// Fitted decay exponent of max |v(r beta) - A(beta) e^{ikr}/r| over the radii.
IdentityReport check_farfield_remainder(const BoundarySolution &sol, std::span<const double> radii,
                                        std::span<const Vec3> directions, double exponent_tol = -1.8);

/// Optical theorem. Lossless: |Im A(alpha,alpha) - (k/4pi) int |A|^2| /
/// |Im A(alpha,alpha)| against tol. Absorbing: the ratio (k/4pi) int |A|^2 /
/// Im A(alpha,alpha) must stay below 1 - tol.
IdentityReport check_optical_theorem(const FarFieldPattern &pattern, cplx forward, bool absorbing, double tol,
                                     const std::string &name = "optical_theorem");

/// max |G(x,y) - G(y,x)| / max |G| over the point pairs.
IdentityReport check_green_symmetry(const SurfaceSpec &spec, const BoundaryCondition &bc, Wavenumber k,
                                    std::span<const std::pair<Vec3, Vec3>> pairs, GridSize grid, double tol,
                                    const SolverOptions &opts = {});

/// Residuals at grid and doubled grid; passes if the fine residual is not
/// larger than the coarse one or both sit below the plateau floor.
IdentityReport check_refinement(const std::string &name, double coarse, double fine, double plateau = 1e-10);

// ---------------------------------------------------------------------------
// suites
// ---------------------------------------------------------------------------

/// Grid sizes and per-identity tolerances of a verification profile.
struct SuiteProfile
{
    std::string name = "fast";
    std::string version = "1";
    GridSize desk{16, 32};
    GridSize oracle{24, 48};
    GridSize fine{32, 64};
    double default_tolerance = 5e-2;
    std::map<std::string, double> tolerances;

    double tolerance(const std::string &identity) const;
};

/// Built-in profiles used when no config file is given.
SuiteProfile fast_profile();
SuiteProfile slow_profile();

/// Names of all identities a suite runs, in report order.
std::vector<std::string> suite_identities();

/// Runs the suite (optionally only the identities whose names start with
/// `only`). Independent checks run in parallel; reports come back sorted by
/// name.
std::vector<IdentityReport> run_suite(const SuiteProfile &profile, const std::string &only = "");

/// Fixed-width text table of reports.
std::string format_reports(const std::vector<IdentityReport> &reports);

} // namespace helmscat
