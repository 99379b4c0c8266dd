// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <cmath>

#include "helmscat/oracle.hpp"
#include "helmscat/quadrature.hpp"

using namespace helmscat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

// reflection coefficient from the standard-library special functions
cplx reference_coeff(int l, double a, double k, const BoundaryCondition &bc)
{
    const double x = k * a;
    const double j = std::sph_bessel(l, x);
    const double y = std::sph_neumann(l, x);
    const double dj = l == 0 ? -std::sph_bessel(1, x) : std::sph_bessel(l - 1, x) - (l + 1.0) / x * j;
    const double dy = l == 0 ? -std::sph_neumann(1, x) : std::sph_neumann(l - 1, x) - (l + 1.0) / x * y;
    const cplx h(j, y), dh(dj, dy);
    switch (bc.kind)
    {
    case BcKind::dirichlet:
        return -j / h;
    case BcKind::neumann:
        return -dj / dh;
    case BcKind::impedance:
        return -(k * dj + bc.h * j) / (k * dh + bc.h * h);
    }
    return {};
}

const BoundaryCondition bcs[] = {BoundaryCondition::dirichlet(), BoundaryCondition::neumann(),
                                 BoundaryCondition::impedance({0.3, 0.2})};

} // namespace

TEST_CASE("partial-wave coefficients match the direct formula", "[oracle]")
{
    for (const BoundaryCondition &bc : bcs)
        for (double ka : {0.3, 1.0, 4.2})
        {
            const PartialWaveCoeffs c = partial_wave_coeffs(1.0, bc, Wavenumber(ka));
            CHECK(c.l_max >= static_cast<int>(ka + 15));
            for (int l = 0; l <= 12; ++l)
            {
                const cplx want = reference_coeff(l, 1.0, ka, bc);
                CHECK(std::abs(c.coeffs[l] - want) < 1e-11 * std::max(1.0, std::abs(want)) + 1e-300);
            }
        }
}

TEST_CASE("coefficients depend on radius and k only through ka for Dirichlet", "[oracle][property]")
{
    const PartialWaveCoeffs a = partial_wave_coeffs(2.0, BoundaryCondition::dirichlet(), Wavenumber(0.5));
    const PartialWaveCoeffs b = partial_wave_coeffs(1.0, BoundaryCondition::dirichlet(), Wavenumber(1.0));
    for (int l = 0; l <= 10; ++l)
        CHECK(std::abs(a.coeffs[l] - b.coeffs[l]) < 1e-15);
}

TEST_CASE("small sphere: Dirichlet amplitude tends to minus the radius", "[oracle]")
{
    const double a = 0.01;
    const Vec3 ez(0, 0, 1);
    const PartialWaveCoeffs c = partial_wave_coeffs(a, BoundaryCondition::dirichlet(), Wavenumber(1.0));
    for (const Vec3 &beta : {ez, Vec3(1, 0, 0), Vec3(0, 0, -1)})
    {
        const cplx A = mie_amplitude(c, 1.0, ez, beta);
        CHECK(std::abs(A + a) < 2.0 * a * a);
    }
}

TEST_CASE("series total field satisfies the boundary conditions", "[oracle]")
{
    const double a = 1.2, k = 1.4;
    const Vec3 alpha = Vec3(0.2, 0.3, 0.9).normalized();
    for (const BoundaryCondition &bc : bcs)
        for (double t : {0.1, 1.2, 2.8})
        {
            const MieField f = mie_total_field(a, bc, Wavenumber(k), alpha, a * direction(t, 0.9));
            const double scale = 1.0 + std::abs(f.u) + std::abs(f.u_r);
            switch (bc.kind)
            {
            case BcKind::dirichlet:
                CHECK(std::abs(f.u) < 1e-11 * scale);
                break;
            case BcKind::neumann:
                CHECK(std::abs(f.u_r) < 1e-11 * scale);
                break;
            case BcKind::impedance:
                CHECK(std::abs(f.u_r + bc.h * f.u) < 1e-11 * scale);
                break;
            }
        }
}

TEST_CASE("total field radial derivative against finite differences", "[oracle]")
{
    const Vec3 alpha(0, 0, 1);
    const Vec3 d = direction(0.7, 0.2);
    const double r = 1.8, h = 1e-5;
    const BoundaryCondition bc = BoundaryCondition::neumann();
    const MieField f = mie_total_field(1.0, bc, Wavenumber(2.0), alpha, r * d);
    const cplx fd = (mie_total_field(1.0, bc, Wavenumber(2.0), alpha, (r + h) * d).u -
                     mie_total_field(1.0, bc, Wavenumber(2.0), alpha, (r - h) * d).u) /
                    (2 * h);
    CHECK(std::abs(f.u_r - fd) < 1e-8);
}

TEST_CASE("far field is the asymptote of the scattered field", "[oracle][property]")
{
    const double k = 1.0;
    const Vec3 alpha(0, 0, 1);
    const Vec3 beta = direction(1.0, 0.5);
    for (const BoundaryCondition &bc : bcs)
    {
        const PartialWaveCoeffs c = partial_wave_coeffs(1.0, bc, Wavenumber(k));
        const cplx A = mie_amplitude(c, k, alpha, beta);
        // r v e^{-ikr} = A + O(1/r); one Richardson step removes the 1/r term
        auto scaled = [&](double r) {
            const Vec3 x = r * beta;
            const cplx v = mie_total_field(1.0, bc, Wavenumber(k), alpha, x).u - std::exp(I * k * alpha.dot(x));
            return v * r * std::exp(-I * k * r);
        };
        const cplx a1 = scaled(400.0), a2 = scaled(800.0);
        CHECK(std::abs(a2 - A) < 1e-2 * std::abs(A));
        CHECK(std::abs(2.0 * a2 - a1 - A) < 1e-4 * std::abs(A));
    }
}

TEST_CASE("optical theorem on the series solution", "[oracle][property]")
{
    const SphereGrid g = sphere_grid(40, 80);
    const Vec3 alpha = Vec3(1, 1, 0).normalized();
    for (double k : {0.5, 1.0, 3.0})
        for (const BoundaryCondition &bc : bcs)
        {
            const FarFieldPattern p = mie_far_field(1.0, bc, Wavenumber(k), alpha, g);
            const PartialWaveCoeffs c = partial_wave_coeffs(1.0, bc, Wavenumber(k));
            const double forward = mie_amplitude(c, k, alpha, alpha).imag();
            const double flux = k / (4 * pi) * p.norm_squared();
            if (bc.kind == BcKind::impedance)
                CHECK(flux < forward * (1.0 - 1e-3)); // absorbing surface
            else
                CHECK_THAT(flux, WithinRel(forward, 1e-12));
        }
}

TEST_CASE("sphere Green's function", "[oracle]")
{
    const Wavenumber k(1.3);
    const Vec3 x(1.5, 0.2, -0.4), y(-0.3, 2.0, 0.8);
    SECTION("symmetry")
    {
        for (const BoundaryCondition &bc : bcs)
            CHECK(std::abs(sphere_greens(1.0, k, x, y, bc) - sphere_greens(1.0, k, y, x, bc)) < 1e-13);
    }
    SECTION("Dirichlet: vanishes on the sphere")
    {
        for (double t : {0.3, 1.6, 2.9})
            CHECK(std::abs(sphere_greens(1.0, k, direction(t, 1.0), y)) < 1e-12);
    }
    SECTION("Neumann: zero radial derivative on the sphere")
    {
        const Vec3 d = direction(1.1, 0.3);
        const double h = 1e-5;
        const BoundaryCondition bc = BoundaryCondition::neumann();
        auto g = [&](double t) { return sphere_greens(1.0, k, (1.0 + t) * d, y, bc); };
        const cplx fd = (-3.0 * g(0.0) + 4.0 * g(h) - g(2 * h)) / (2 * h); // one-sided, outside only
        CHECK(std::abs(fd) < 1e-7);
    }
    SECTION("far points: scattered part is small for a tiny sphere")
    {
        const cplx free = std::exp(I * 1.3 * (x - y).norm()) / (4 * pi * (x - y).norm());
        CHECK(std::abs(sphere_greens(0.01, k, x, y) - free) < 0.02 * std::abs(free));
    }
    SECTION("errors")
    {
        CHECK_THROWS_AS(sphere_greens(1.0, k, Vec3(0.5, 0, 0), y), DomainError);
        CHECK_THROWS_AS(sphere_greens(1.0, k, y, y), DomainError);
    }
}

TEST_CASE("multipole solution has the harmonic as its trace", "[oracle]")
{
    const Wavenumber k(0.9);
    for (double t : {0.4, 2.0})
    {
        const Vec3 d = direction(t, 1.7);
        CHECK(std::abs(sphere_multipole(1.0, k, 2, -1, d) - sph_harmonic(2, -1, t, 1.7)) < 1e-13);
        // outgoing decay like e^{ikr}/r
        const cplx far1 = sphere_multipole(1.0, k, 2, -1, 500.0 * d) * 500.0;
        const cplx far2 = sphere_multipole(1.0, k, 2, -1, 1000.0 * d) * 1000.0;
        CHECK(std::abs(std::abs(far1) - std::abs(far2)) < 1e-3 * std::abs(far1));
    }
}

TEST_CASE("oracle argument checks", "[oracle]")
{
    CHECK_THROWS_AS(partial_wave_coeffs(1.0, BoundaryCondition::dirichlet(), Wavenumber(41.0)), DomainError);
    CHECK_THROWS_AS(partial_wave_coeffs(-1.0, BoundaryCondition::dirichlet(), Wavenumber(1.0)), DomainError);
    CHECK_THROWS_AS(BoundaryCondition::impedance({0.3, -0.1}), DomainError);
    CHECK_THROWS_AS(Wavenumber(-1.0), DomainError);
}
