// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include "helmscat/oracle.hpp"

#include "helmscat/kernels.hpp"
#include "helmscat/mathfn.hpp"

namespace helmscat
{

namespace
{

void check_bc(const BoundaryCondition &bc)
{
    if (bc.kind == BcKind::impedance && bc.h.imag() < 0.0)
        throw DomainError("oracle: impedance requires Im h >= 0");
}

/// rho_l = h_l(z) / h_{l-1}(z), l = 1..lmax (rho_0 unused). Upward recurrence
/// of the ratio is stable because h_l is the dominant solution.
std::vector<cplx> hankel_ratios(int lmax, double z)
{
    std::vector<cplx> rho(lmax + 1, cplx{});
    if (lmax == 0)
        return rho;
    const cplx h0 = cplx(std::sin(z), -std::cos(z)) / z;
    const cplx h1 = cplx(std::sin(z) / (z * z) - std::cos(z) / z, -std::cos(z) / (z * z) - std::sin(z) / z);
    rho[1] = h1 / h0;
    for (int l = 1; l < lmax; ++l)
        rho[l + 1] = (2.0 * l + 1.0) / z - 1.0 / rho[l];
    return rho;
}

/// s_l = j_l(z) / j_{l-1}(z), l = 1..lmax, by the backward continued fraction.
std::vector<double> bessel_ratios(int lmax, double z)
{
    std::vector<double> s(lmax + 2, 0.0);
    const int top = lmax + 60 + static_cast<int>(z);
    double next = 0.0;
    for (int l = top; l >= 1; --l)
    {
        const double cur = 1.0 / ((2.0 * l + 1.0) / z - next);
        if (l <= lmax + 1)
            s[l] = cur;
        next = cur;
    }
    return s;
}

/// h_l'(z)/h_l(z) from the ratio table.
cplx hankel_log_derivative(int l, double z, const std::vector<cplx> &rho)
{
    return l == 0 ? -rho[1] : 1.0 / rho[l] - (l + 1.0) / z;
}

double bessel_log_derivative(int l, double z, const std::vector<double> &s)
{
    return l == 0 ? -s[1] : 1.0 / s[l] - (l + 1.0) / z;
}

/// c_l h_l(ka) for each boundary condition, given j_l and j_l' at ka and the
/// Hankel log-derivative there.
cplx reflected_trace(const BoundaryCondition &bc, double k, double j, double dj, cplx hlog)
{
    switch (bc.kind)
    {
    case BcKind::dirichlet:
        return -j;
    case BcKind::neumann:
        return -dj / hlog;
    case BcKind::impedance:
        return -(k * dj + bc.h * j) / (k * hlog + bc.h);
    }
    return {};
}

} // namespace

PartialWaveCoeffs partial_wave_coeffs(double radius, const BoundaryCondition &bc, Wavenumber kw)
{
    check_bc(bc);
    const double k = kw.value();
    if (!(radius > 0.0))
        throw DomainError("oracle: radius must be positive");
    const double ka = k * radius;
    if (ka > 40.0)
        throw DomainError("oracle: ka above 40 is outside the supported range");

    PartialWaveCoeffs c;
    c.ka = ka;
    c.bc = bc;
    int lmax = static_cast<int>(std::ceil(ka + 15.0 + 3.0 * std::cbrt(ka)));
    for (;;)
    {
        const RadialFunctions rf = radial_functions(lmax, ka);
        c.coeffs.resize(lmax + 1);
        for (int l = 0; l <= lmax; ++l)
        {
            const cplx hlog = rf.dh[l] / rf.h[l];
            c.coeffs[l] = reflected_trace(bc, k, rf.j[l], rf.dj[l], hlog) / rf.h[l];
        }
        if (std::abs(c.coeffs[lmax]) < 1e-14 || lmax > 400)
            break;
        lmax += 5;
    }
    c.l_max = lmax;
    return c;
}

cplx mie_amplitude(const PartialWaveCoeffs &c, double k, const Vec3 &alpha, const Vec3 &beta)
{
    const auto p = legendre_p(c.l_max, std::clamp(alpha.dot(beta), -1.0, 1.0));
    cplx s{};
    for (int l = c.l_max; l >= 0; --l)
        s += (2.0 * l + 1.0) * c.coeffs[l] * p[l];
    return -I / k * s;
}

FarFieldPattern mie_far_field(double radius, const BoundaryCondition &bc, Wavenumber k, const Vec3 &alpha,
                              std::span<const Vec3> directions)
{
    const PartialWaveCoeffs c = partial_wave_coeffs(radius, bc, k);
    FarFieldPattern p;
    p.k = k;
    p.alpha = alpha;
    p.directions.assign(directions.begin(), directions.end());
    for (const Vec3 &b : directions)
        p.values.push_back(mie_amplitude(c, k, alpha, b));
    return p;
}

FarFieldPattern mie_far_field(double radius, const BoundaryCondition &bc, Wavenumber k, const Vec3 &alpha,
                              const SphereGrid &grid)
{
    FarFieldPattern p = mie_far_field(radius, bc, k, alpha, std::span<const Vec3>(grid.directions));
    p.n_theta = grid.n_theta;
    p.n_phi = grid.n_phi;
    p.weights = grid.weights;
    return p;
}

MieField mie_total_field(double radius, const BoundaryCondition &bc, Wavenumber kw, const Vec3 &alpha,
                         const Vec3 &x)
{
    check_bc(bc);
    const double k = kw.value();
    const double r = x.norm();
    if (r < radius * (1.0 - 1e-12))
        throw DomainError("mie_total_field: point inside the sphere");
    const double ka = k * radius, kr = k * r;
    const double ct = r > 0.0 ? std::clamp(x.dot(alpha) / r, -1.0, 1.0) : 1.0;

    // the incident series needs its own tail check at large kr
    int l_inc = static_cast<int>(std::ceil(kr + 15.0 + 3.0 * std::cbrt(kr)));
    while ((2.0 * l_inc + 1.0) * std::abs(sph_bessel_j(l_inc, kr)) > 1e-17)
        l_inc += 4;
    const int l_sc = static_cast<int>(std::ceil(ka + 30.0 + 3.0 * std::cbrt(ka)));
    const int lmax = std::max(l_inc, l_sc);

    const RadialFunctions at_r = radial_functions(lmax, kr);
    const RadialFunctions at_a = radial_functions(l_sc, ka);
    const auto rho_r = hankel_ratios(l_sc + 1, kr);
    const auto rho_a = hankel_ratios(l_sc + 1, ka);
    const auto p = legendre_p(lmax, ct);

    MieField f{};
    cplx il = 1.0;
    cplx hr = (cplx(std::sin(kr), -std::cos(kr)) / kr) / (cplx(std::sin(ka), -std::cos(ka)) / ka); // h_l(kr)/h_l(ka)
    for (int l = 0; l <= lmax; ++l)
    {
        const double pref = (2.0 * l + 1.0) * p[l];
        cplx term = at_r.j[l];
        cplx dterm = at_r.dj[l];
        if (l <= l_sc)
        {
            if (l > 0)
                hr *= rho_r[l] / rho_a[l];
            const cplx q = reflected_trace(bc, k, at_a.j[l], at_a.dj[l], hankel_log_derivative(l, ka, rho_a));
            term += q * hr;
            dterm += q * hr * hankel_log_derivative(l, kr, rho_r);
        }
        f.u += il * pref * term;
        f.u_r += il * pref * k * dterm;
        il *= I;
    }
    return f;
}

cplx sphere_greens(double radius, Wavenumber kw, const Vec3 &x, const Vec3 &y, const BoundaryCondition &bc)
{
    check_bc(bc);
    const double k = kw.value();
    const double rx = x.norm(), ry = y.norm();
    if (rx < radius * (1.0 - 1e-12) || ry < radius * (1.0 - 1e-12))
        throw DomainError("sphere_greens: point inside the sphere");
    if ((x - y).norm() == 0.0)
        throw DomainError("sphere_greens: coincident points");

    const double ka = k * radius;
    // terms decay like (a^2 / (|x||y|))^l
    const double ratio = rx * ry / (radius * radius);
    const double decay = std::log(ratio);
    const double need = decay > 0.0 ? 40.0 / decay : 1e9;
    const double lmax_d = ka + 30.0 + std::max(k * std::max(rx, ry), 0.0) + need;
    if (lmax_d > 20000.0)
        throw DomainError("sphere_greens: points too close to the sphere for the series");
    const int lmax = static_cast<int>(lmax_d);

    const auto rho_a = hankel_ratios(lmax + 1, ka);
    const auto rho_x = hankel_ratios(lmax + 1, k * rx);
    const auto rho_y = hankel_ratios(lmax + 1, k * ry);
    const auto s_a = bessel_ratios(lmax + 1, ka);
    const double ct = std::clamp(x.dot(y) / (rx * ry), -1.0, 1.0);

    const cplx h0a = cplx(std::sin(ka), -std::cos(ka)) / ka;
    const double j0a = std::sin(ka) / ka;
    cplx hx = (cplx(std::sin(k * rx), -std::cos(k * rx)) / (k * rx)) / h0a; // h_l(k|x|)/h_l(ka)
    cplx hy = (cplx(std::sin(k * ry), -std::cos(k * ry)) / (k * ry)) / h0a;
    cplx jh = j0a * h0a; // j_l(ka) h_l(ka)

    double p_prev = 0.0, p_cur = 1.0; // Legendre P_{l-1}, P_l
    cplx sum{};
    for (int l = 0; l <= lmax; ++l)
    {
        if (l > 0)
        {
            hx *= rho_x[l] / rho_a[l];
            hy *= rho_y[l] / rho_a[l];
            jh *= s_a[l] * rho_a[l];
            const double p_next = ((2.0 * l - 1.0) * ct * p_cur - (l - 1.0) * p_prev) / l;
            p_prev = p_cur;
            p_cur = p_next;
        }
        // c_l h_l(ka)^2 = -j h (k j'/j + h) / (k h'/h + h), Dirichlet: -j h
        cplx chh = -jh;
        if (bc.kind != BcKind::dirichlet)
        {
            const cplx hb = bc.kind == BcKind::impedance ? bc.h : cplx{};
            chh *= (k * bessel_log_derivative(l, ka, s_a) + hb) / (k * hankel_log_derivative(l, ka, rho_a) + hb);
        }
        sum += (2.0 * l + 1.0) * chh * hx * hy * p_cur;
    }
    return kernel_g(x, y, k) + I * k / (4.0 * pi) * sum;
}

cplx sphere_multipole(double radius, Wavenumber kw, int l, int m, const Vec3 &x)
{
    const double k = kw.value();
    const double r = x.norm();
    if (r < radius * (1.0 - 1e-12))
        throw DomainError("sphere_multipole: point inside the sphere");
    const auto rho_r = hankel_ratios(l + 1, k * r);
    const auto rho_a = hankel_ratios(l + 1, k * radius);
    cplx h = (cplx(std::sin(k * r), -std::cos(k * r)) / (k * r)) /
             (cplx(std::sin(k * radius), -std::cos(k * radius)) / (k * radius));
    for (int n = 1; n <= l; ++n)
        h *= rho_r[n] / rho_a[n];
    const auto [theta, phi] = angles(x);
    return h * sph_harmonic(l, m, theta, phi);
}

} // namespace helmscat
