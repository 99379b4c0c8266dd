// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include "helmscat/common.hpp"

namespace helmscat
{

namespace detail
{

inline double checked_distance(const Vec3 &x, const Vec3 &y)
{
    const double r = (x - y).norm();
    if (!(r > 0.0))
        throw GeometryError("kernel evaluated at coincident points");
    return r;
}

} // namespace detail

/// Outgoing free-space kernel e^{ik|x-y|} / (4 pi |x-y|).
inline cplx kernel_g(const Vec3 &x, const Vec3 &y, double k)
{
    const double r = detail::checked_distance(x, y);
    return std::polar(1.0 / (4.0 * pi * r), k * r);
}

/// d/dN_s of kernel_g(x, s): normal derivative at the source point.
inline cplx kernel_g_normal(const Vec3 &x, const Vec3 &s, const Vec3 &normal_s, double k)
{
    const Vec3 d = s - x;
    const double r = detail::checked_distance(x, s);
    const cplx g = std::polar(1.0 / (4.0 * pi * r), k * r);
    return g * cplx(-1.0 / r, k) * (d.dot(normal_s) / r);
}

/// d/dN_x of kernel_g(x, s): normal derivative at the target point.
inline cplx kernel_g_normal_target(const Vec3 &x, const Vec3 &normal_x, const Vec3 &s, double k)
{
    return kernel_g_normal(s, x, normal_x, k);
}

/// Gradient of kernel_g with respect to x.
inline CVec3 kernel_g_gradient(const Vec3 &x, const Vec3 &y, double k)
{
    const Vec3 d = x - y;
    const double r = detail::checked_distance(x, y);
    const cplx g = std::polar(1.0 / (4.0 * pi * r), k * r);
    const cplx f = g * cplx(-1.0 / r, k) / r;
    return f * d.cast<cplx>();
}

/// Gradient with respect to x of kernel_g_normal(x, s, n_s).
inline CVec3 kernel_g_normal_gradient(const Vec3 &x, const Vec3 &s, const Vec3 &normal_s, double k)
{
    const Vec3 d = x - s;
    const double r = detail::checked_distance(x, s);
    const cplx g = std::polar(1.0 / (4.0 * pi * r), k * r);
    const cplx a = cplx(-1.0 / r, k);
    const cplx g1 = g * a;                          // dg/dr
    const cplx g2 = g * (a * a + 1.0 / (r * r));    // d2g/dr2
    const double dn = d.dot(normal_s);
    const cplx radial = -(g2 - g1 / r) * dn / (r * r);
    return radial * d.cast<cplx>() - (g1 / r) * normal_s.cast<cplx>();
}

/// Plane-wave factor e^{-ik beta.s} of the far-field kernel.
inline cplx farfield_kernel(const Vec3 &beta, const Vec3 &s, double k)
{
    return std::polar(1.0, -k * beta.dot(s));
}

} // namespace helmscat
