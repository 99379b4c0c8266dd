// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include <span>
#include <vector>

#include "helmscat/common.hpp"

namespace helmscat
{

// ---------------------------------------------------------------------------
// Spherical Bessel / Hankel functions of real positive argument.
//
// j_l is generated by normalized downward (Miller) recurrence, y_l by upward
// recurrence. The array forms never throw on underflow/overflow of the high
// orders; the scalar forms report those regimes as DomainError.
// ---------------------------------------------------------------------------

std::vector<double> sph_bessel_j_array(int lmax, double x);
std::vector<double> sph_bessel_y_array(int lmax, double x);

double sph_bessel_j(int l, double x);
double sph_bessel_y(int l, double x);
cplx sph_hankel1(int l, double x);

/// j_l, j_l', h_l^(1), h_l^(1)' for l = 0..lmax at x.
struct RadialFunctions
{
    std::vector<double> j, dj;
    std::vector<cplx> h, dh;
};

RadialFunctions radial_functions(int lmax, double x);

/// Ordinary Legendre polynomials P_0..P_lmax at x.
std::vector<double> legendre_p(int lmax, double x);

// ---------------------------------------------------------------------------
// Associated Legendre functions, orthonormal on the sphere, without the
// Condon-Shortley phase: Pbar_l^m(cos t) e^{i m p} integrates to one.
// ---------------------------------------------------------------------------

class AssociatedLegendre
{
public:
    explicit AssociatedLegendre(int lmax);

    /// Fill the tables at cos(theta), sin(theta) >= 0. The sin-divided values
    /// stay finite at the poles.
    void compute(double cos_theta, double sin_theta, bool with_derivatives = false);

    int lmax() const { return lmax_; }
    static int index(int l, int m) { return l * (l + 1) / 2 + m; }

    double p(int l, int m) const { return p_[index(l, m)]; }
    /// Pbar_l^m / sin(theta) for m >= 1 (zero for m = 0).
    double p_over_sin(int l, int m) const { return q_[index(l, m)]; }
    double dp_dtheta(int l, int m) const { return dp_[index(l, m)]; }

    const double *p_data() const { return p_.data(); }

private:
    int lmax_;
    std::vector<double> p_, q_, dp_;
    // recurrence coefficients, indexed like the tables
    std::vector<double> a_, b_, d_lo_, d_hi_, sect_;
};

inline int sh_index(int l, int m) { return l * l + l + m; }
inline int sh_count(int degree) { return (degree + 1) * (degree + 1); }

/// Complex orthonormal spherical harmonic with Condon-Shortley phase.
cplx sph_harmonic(int l, int m, double theta, double phi);

/// Real orthonormal harmonic: m > 0 cos branch, m < 0 sin branch.
double real_sph_harmonic(int l, int m, double theta, double phi);

/// All complex harmonics up to `degree` at a unit direction, indexed sh_index.
void sph_harmonics(int degree, const Vec3 &dir, std::span<cplx> out);

/// All real harmonics up to `degree` at a unit direction, indexed sh_index.
void real_sph_harmonics(int degree, const Vec3 &dir, std::span<double> out);

/// Complex spherical-harmonic expansion truncated at `degree`.
struct SHExpansion
{
    int degree = 0;
    std::vector<cplx> coeffs; // (degree+1)^2, indexed sh_index(l, m)

    SHExpansion() = default;
    explicit SHExpansion(int L) : degree(L), coeffs(sh_count(L), cplx{}) {}

    cplx &at(int l, int m) { return coeffs.at(sh_index(l, m)); }
    cplx at(int l, int m) const { return coeffs.at(sh_index(l, m)); }

    cplx operator()(const Vec3 &dir) const;
    cplx operator()(double theta, double phi) const { return (*this)(direction(theta, phi)); }

    /// Sum of |c_lm|^2, equal to the sphere integral of |f|^2.
    double norm_squared() const;
};

struct FitResult
{
    SHExpansion expansion;
    double residual_norm = 0.0;   // weighted l2 norm of the sample misfit
    double condition_number = 0.0;
};

/// Least-squares fit of a degree-L expansion to sampled values. Raises
/// DomainError when the design matrix is (numerically) rank deficient.
FitResult fit_expansion(std::span<const Vec3> directions, std::span<const cplx> values, int degree,
                        std::span<const double> weights = {});

} // namespace helmscat
