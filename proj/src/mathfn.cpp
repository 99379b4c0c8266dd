// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include "helmscat/mathfn.hpp"

#include <limits>

#include <Eigen/SVD>

namespace helmscat
{

namespace
{

void require_positive(double x, const char *what)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(std::string(what) + ": argument must be positive and finite");
}

} // namespace

std::vector<double> sph_bessel_j_array(int lmax, double x)
{
    require_positive(x, "sph_bessel_j");
    if (lmax < 0)
        throw DomainError("sph_bessel_j: negative order");

    std::vector<double> j(lmax + 1, 0.0);
    const double j0 = std::sin(x) / x;
    const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;

    if (x > lmax)
    {
        // upward recurrence is stable while l < x
        j[0] = j0;
        if (lmax >= 1)
            j[1] = j1;
        for (int l = 1; l < lmax; ++l)
            j[l + 1] = (2 * l + 1) / x * j[l] - j[l - 1];
        return j;
    }

    const int start = lmax + 20 + static_cast<int>(std::sqrt(40.0 * (lmax + 1)));
    double f_next = 0.0, f = 1e-300;
    for (int l = start; l >= 1; --l)
    {
        const double f_prev = (2 * l + 1) / x * f - f_next;
        f_next = f;
        f = f_prev;
        if (l - 1 <= lmax)
            j[l - 1] = f;
        if (l <= lmax)
            j[l] = f_next;
        if (std::abs(f) > 1e250)
        {
            f *= 1e-250;
            f_next *= 1e-250;
            for (int m = l - 1; m <= lmax; ++m)
                if (m >= 0)
                    j[m] *= 1e-250;
        }
    }
    // normalize against whichever closed form is better conditioned
    const double scale = (std::abs(j0) >= std::abs(j1) || lmax < 1) ? j0 / j[0] : j1 / j[1];
    for (double &v : j)
        v *= scale;
    return j;
}

std::vector<double> sph_bessel_y_array(int lmax, double x)
{
    require_positive(x, "sph_bessel_y");
    if (lmax < 0)
        throw DomainError("sph_bessel_y: negative order");
    std::vector<double> y(lmax + 1);
    y[0] = -std::cos(x) / x;
    if (lmax >= 1)
        y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
    for (int l = 1; l < lmax; ++l)
        y[l + 1] = (2 * l + 1) / x * y[l] - y[l - 1];
    return y;
}

double sph_bessel_j(int l, double x)
{
    const double v = sph_bessel_j_array(l, x)[l];
    if (v != 0.0 && std::abs(v) < std::numeric_limits<double>::min())
        throw DomainError("sph_bessel_j: order far above argument, result underflows");
    if (v == 0.0 && l > x)
        throw DomainError("sph_bessel_j: order far above argument, result underflows");
    return v;
}

double sph_bessel_y(int l, double x)
{
    const double v = sph_bessel_y_array(l, x)[l];
    if (!std::isfinite(v))
        throw DomainError("sph_bessel_y: order far above argument, result overflows");
    return v;
}

cplx sph_hankel1(int l, double x)
{
    return {sph_bessel_j(l, x), sph_bessel_y(l, x)};
}

RadialFunctions radial_functions(int lmax, double x)
{
    const auto j = sph_bessel_j_array(lmax + 1, x);
    const auto y = sph_bessel_y_array(lmax + 1, x);
    RadialFunctions rf;
    rf.j.resize(lmax + 1);
    rf.dj.resize(lmax + 1);
    rf.h.resize(lmax + 1);
    rf.dh.resize(lmax + 1);
    for (int l = 0; l <= lmax; ++l)
    {
        rf.j[l] = j[l];
        rf.h[l] = {j[l], y[l]};
        if (l == 0)
        {
            rf.dj[0] = -j[1];
            rf.dh[0] = {-j[1], -y[1]};
        }
        else
        {
            rf.dj[l] = j[l - 1] - (l + 1) / x * j[l];
            rf.dh[l] = cplx{j[l - 1], y[l - 1]} - (l + 1) / x * rf.h[l];
        }
    }
    return rf;
}

std::vector<double> legendre_p(int lmax, double x)
{
    std::vector<double> p(lmax + 1);
    p[0] = 1.0;
    if (lmax >= 1)
        p[1] = x;
    for (int l = 1; l < lmax; ++l)
        p[l + 1] = ((2 * l + 1) * x * p[l] - l * p[l - 1]) / (l + 1);
    return p;
}

// ---------------------------------------------------------------------------

AssociatedLegendre::AssociatedLegendre(int lmax) : lmax_(lmax)
{
    if (lmax < 0)
        throw DomainError("AssociatedLegendre: negative degree");
    const int n = index(lmax, lmax) + 1;
    p_.assign(n, 0.0);
    q_.assign(n, 0.0);
    dp_.assign(n, 0.0);
    a_.assign(n, 0.0);
    b_.assign(n, 0.0);
    d_lo_.assign(n, 0.0);
    d_hi_.assign(n, 0.0);
    sect_.assign(lmax + 1, 0.0);
    for (int m = 1; m <= lmax; ++m)
        sect_[m] = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    for (int l = 0; l <= lmax; ++l)
    {
        for (int m = 0; m <= l; ++m)
        {
            const int i = index(l, m);
            if (l == m + 1)
                a_[i] = std::sqrt(2.0 * m + 3.0);
            else if (l >= m + 2)
            {
                a_[i] = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
                b_[i] = std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
            }
            if (m == 0)
                d_hi_[i] = (l == 0) ? 0.0 : std::sqrt(double(l) * (l + 1));
            else
            {
                d_lo_[i] = 0.5 * std::sqrt(double(l + m) * (l - m + 1));
                d_hi_[i] = (m < l) ? 0.5 * std::sqrt(double(l + m + 1) * (l - m)) : 0.0;
            }
        }
    }
}

void AssociatedLegendre::compute(double x, double s, bool with_derivatives)
{
    const int L = lmax_;
    p_[0] = 1.0 / std::sqrt(4.0 * pi);
    q_[0] = 0.0;
    // sectoral terms
    for (int m = 1; m <= L; ++m)
    {
        const double f = sect_[m];
        p_[index(m, m)] = f * s * p_[index(m - 1, m - 1)];
        q_[index(m, m)] = (m == 1) ? f * p_[0] : f * s * q_[index(m - 1, m - 1)];
    }
    for (int m = 0; m <= L; ++m)
    {
        if (m + 1 <= L)
        {
            const int i = index(m + 1, m);
            p_[i] = a_[i] * x * p_[index(m, m)];
            q_[i] = a_[i] * x * q_[index(m, m)];
        }
        for (int l = m + 2; l <= L; ++l)
        {
            const int i = index(l, m);
            const int i1 = index(l - 1, m);
            const int i2 = index(l - 2, m);
            p_[i] = a_[i] * (x * p_[i1] - b_[i] * p_[i2]);
            q_[i] = a_[i] * (x * q_[i1] - b_[i] * q_[i2]);
        }
    }
    if (!with_derivatives)
        return;
    for (int l = 0; l <= L; ++l)
    {
        const int i0 = index(l, 0);
        dp_[i0] = (l == 0) ? 0.0 : -d_hi_[i0] * p_[i0 + 1];
        for (int m = 1; m <= l; ++m)
        {
            const int i = i0 + m;
            const double hi = (m < l) ? d_hi_[i] * p_[i + 1] : 0.0;
            dp_[i] = d_lo_[i] * p_[i - 1] - hi;
        }
    }
}

// ---------------------------------------------------------------------------

namespace
{

struct DirTrig
{
    double cos_t, sin_t, cos_p, sin_p;
};

DirTrig dir_trig(const Vec3 &d)
{
    const double s = std::hypot(d.x(), d.y());
    const double r = d.norm();
    DirTrig t{d.z() / r, s / r, 1.0, 0.0};
    if (s > 0.0)
    {
        t.cos_p = d.x() / s;
        t.sin_p = d.y() / s;
    }
    return t;
}

} // namespace

cplx sph_harmonic(int l, int m, double theta, double phi)
{
    if (l < 0 || std::abs(m) > l)
        throw DomainError("sph_harmonic: require |m| <= l");
    AssociatedLegendre P(l);
    P.compute(std::cos(theta), std::sin(theta));
    const int am = std::abs(m);
    const double sign = (am % 2) ? -1.0 : 1.0;
    const cplx y = sign * P.p(l, am) * std::polar(1.0, am * phi);
    return (m >= 0) ? y : sign * std::conj(y);
}

double real_sph_harmonic(int l, int m, double theta, double phi)
{
    if (l < 0 || std::abs(m) > l)
        throw DomainError("real_sph_harmonic: require |m| <= l");
    AssociatedLegendre P(l);
    P.compute(std::cos(theta), std::sin(theta));
    if (m == 0)
        return P.p(l, 0);
    if (m > 0)
        return std::sqrt(2.0) * P.p(l, m) * std::cos(m * phi);
    return std::sqrt(2.0) * P.p(l, -m) * std::sin(-m * phi);
}

void sph_harmonics(int degree, const Vec3 &dir, std::span<cplx> out)
{
    if (out.size() < static_cast<std::size_t>(sh_count(degree)))
        throw DomainError("sph_harmonics: output too small");
    const DirTrig t = dir_trig(dir);
    AssociatedLegendre P(degree);
    P.compute(t.cos_t, t.sin_t);
    const cplx e1{t.cos_p, t.sin_p};
    cplx em{1.0, 0.0};
    for (int m = 0; m <= degree; ++m)
    {
        const double sign = (m % 2) ? -1.0 : 1.0;
        for (int l = m; l <= degree; ++l)
        {
            const cplx y = sign * P.p(l, m) * em;
            out[sh_index(l, m)] = y;
            if (m > 0)
                out[sh_index(l, -m)] = sign * std::conj(y);
        }
        em *= e1;
    }
}

void real_sph_harmonics(int degree, const Vec3 &dir, std::span<double> out)
{
    if (out.size() < static_cast<std::size_t>(sh_count(degree)))
        throw DomainError("real_sph_harmonics: output too small");
    const DirTrig t = dir_trig(dir);
    AssociatedLegendre P(degree);
    P.compute(t.cos_t, t.sin_t);
    const double r2 = std::sqrt(2.0);
    double cm = 1.0, sm = 0.0;
    for (int m = 0; m <= degree; ++m)
    {
        for (int l = m; l <= degree; ++l)
        {
            if (m == 0)
                out[sh_index(l, 0)] = P.p(l, 0);
            else
            {
                out[sh_index(l, m)] = r2 * P.p(l, m) * cm;
                out[sh_index(l, -m)] = r2 * P.p(l, m) * sm;
            }
        }
        const double c = cm * t.cos_p - sm * t.sin_p;
        sm = sm * t.cos_p + cm * t.sin_p;
        cm = c;
    }
}

cplx SHExpansion::operator()(const Vec3 &dir) const
{
    std::vector<cplx> y(sh_count(degree));
    sph_harmonics(degree, dir, y);
    cplx sum{};
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        sum += coeffs[i] * y[i];
    return sum;
}

double SHExpansion::norm_squared() const
{
    double s = 0.0;
    for (const cplx &c : coeffs)
        s += std::norm(c);
    return s;
}

FitResult fit_expansion(std::span<const Vec3> directions, std::span<const cplx> values, int degree,
                        std::span<const double> weights)
{
    if (degree < 0)
        throw DomainError("fit_expansion: negative degree");
    if (directions.size() != values.size())
        throw DomainError("fit_expansion: directions and values differ in length");
    if (!weights.empty() && weights.size() != values.size())
        throw DomainError("fit_expansion: weights and values differ in length");
    const int nb = sh_count(degree);
    const auto n = static_cast<Eigen::Index>(values.size());
    if (n < nb)
        throw DomainError("fit_expansion: " + std::to_string(n) + " samples cannot determine " +
                          std::to_string(nb) + " coefficients (rank deficient)");

    MatC design(n, nb);
    VecC rhs(n);
    std::vector<cplx> y(nb);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double sw = weights.empty() ? 1.0 : std::sqrt(weights[i]);
        sph_harmonics(degree, directions[i].normalized(), y);
        for (int b = 0; b < nb; ++b)
            design(i, b) = sw * y[b];
        rhs(i) = sw * values[i];
    }

    Eigen::BDCSVD<MatC> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(nb - 1);
    if (!(smax > 0.0) || smin <= smax * 1e-14 * std::max<double>(n, nb))
        throw DomainError("fit_expansion: sampling design matrix is rank deficient (condition " +
                          std::to_string(smin > 0.0 ? smax / smin : INFINITY) + ")");

    const VecC c = svd.solve(rhs);
    FitResult fit;
    fit.expansion = SHExpansion(degree);
    for (int b = 0; b < nb; ++b)
        fit.expansion.coeffs[b] = c(b);
    fit.residual_norm = (design * c - rhs).norm();
    fit.condition_number = smax / smin;
    return fit;
}

} // namespace helmscat
