// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include "helmscat/kernels.hpp"

using namespace helmscat;

namespace
{

const Vec3 x0(0.4, -0.3, 1.2);
const Vec3 ysrc(-0.5, 0.2, 0.1);

cplx fd6(const std::function<cplx(double)> &f, double h)
{
    return (-f(-3 * h) + 9.0 * f(-2 * h) - 45.0 * f(-h) + 45.0 * f(h) - 9.0 * f(2 * h) + f(3 * h)) / (60.0 * h);
}

cplx fd6_second(const std::function<cplx(double)> &f, double h)
{
    return (2.0 * f(-3 * h) - 27.0 * f(-2 * h) + 270.0 * f(-h) - 490.0 * f(0) + 270.0 * f(h) - 27.0 * f(2 * h) +
            2.0 * f(3 * h)) /
           (180.0 * h * h);
}

} // namespace

TEST_CASE("free kernel value", "[kernels]")
{
    const double k = 2.0;
    const double r = (x0 - ysrc).norm();
    const cplx want = std::exp(I * k * r) / (4 * pi * r);
    CHECK(std::abs(kernel_g(x0, ysrc, k) - want) < 1e-15);
    CHECK(std::abs(kernel_g(x0, ysrc, k) - kernel_g(ysrc, x0, k)) == 0.0);
    CHECK_THROWS_AS(kernel_g(x0, x0, k), GeometryError);
}

TEST_CASE("normal derivatives against finite differences", "[kernels]")
{
    const double k = 1.7;
    const Vec3 n = Vec3(0.3, 0.8, -0.5).normalized();
    const cplx fd_src = fd6([&](double t) { return kernel_g(x0, ysrc + t * n, k); }, 1e-3);
    CHECK(std::abs(kernel_g_normal(x0, ysrc, n, k) - fd_src) < 1e-10);
    const cplx fd_tgt = fd6([&](double t) { return kernel_g(x0 + t * n, ysrc, k); }, 1e-3);
    CHECK(std::abs(kernel_g_normal_target(x0, n, ysrc, k) - fd_tgt) < 1e-10);

    const CVec3 grad = kernel_g_gradient(x0, ysrc, k);
    const CVec3 ngrad = kernel_g_normal_gradient(x0, ysrc, n, k);
    for (int i = 0; i < 3; ++i)
    {
        const Vec3 e = Vec3::Unit(i);
        CHECK(std::abs(grad[i] - fd6([&](double t) { return kernel_g(x0 + t * e, ysrc, k); }, 1e-3)) < 1e-10);
        CHECK(std::abs(ngrad[i] - fd6([&](double t) { return kernel_g_normal(x0 + t * e, ysrc, n, k); }, 1e-3)) <
              1e-9);
    }
}

TEST_CASE("kernel solves the Helmholtz equation away from the source", "[kernels][property]")
{
    const double k = 3.0;
    for (const Vec3 &x : {x0, Vec3(2.0, 1.0, -1.0), Vec3(0.0, 0.0, 0.7)})
    {
        cplx lap{};
        for (int i = 0; i < 3; ++i)
            lap += fd6_second([&](double t) { return kernel_g(x + t * Vec3::Unit(i), ysrc, k); }, 2e-3);
        const cplx g = kernel_g(x, ysrc, k);
        CHECK(std::abs(lap + k * k * g) < 1e-7 * std::abs(k * k * g));
    }
}

TEST_CASE("far-field kernel is the asymptote of the free kernel", "[kernels][property]")
{
    const double k = 1.3;
    const Vec3 beta = Vec3(1.0, 2.0, -0.5).normalized();
    double prev = 1e300;
    for (double r : {1e2, 1e3, 1e4})
    {
        const cplx scaled = 4 * pi * r * std::exp(-I * k * r) * kernel_g(r * beta, ysrc, k);
        const double err = std::abs(scaled - farfield_kernel(beta, ysrc, k));
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}
