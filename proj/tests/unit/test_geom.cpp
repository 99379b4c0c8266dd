// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include "helmscat/geom.hpp"

using namespace helmscat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

// independent closed forms for spheroid area
double prolate_area(double a, double c)
{
    const double e = std::sqrt(1.0 - a * a / (c * c));
    return 2.0 * pi * a * a * (1.0 + c / (a * e) * std::asin(e));
}

double oblate_area(double a, double c)
{
    const double e = std::sqrt(1.0 - c * c / (a * a));
    return 2.0 * pi * a * a + pi * c * c / e * std::log((1.0 + e) / (1.0 - e));
}

} // namespace

TEST_CASE("sphere discretization", "[geom]")
{
    const QuadSurface q = discretize(make_sphere(1.5), 12, 24);
    CHECK(q.size() == 288);
    CHECK_THAT(q.area(), WithinRel(4 * pi * 1.5 * 1.5, 1e-13));
    CHECK(q.centroid().norm() < 1e-14);
    for (std::size_t j = 0; j < q.size(); ++j)
    {
        CHECK_THAT(q.nodes[j].norm(), WithinRel(1.5, 1e-14));
        CHECK((q.normals[j] - q.nodes[j] / 1.5).norm() < 1e-13);
    }
    CHECK(q.panel_diameter > 0.0);
    CHECK(q.panel_diameter < 1.0);
}

TEST_CASE("spheroid area against the closed form", "[geom]")
{
    CHECK_THAT(spheroid_area(1.0, 1.3), WithinRel(prolate_area(1.0, 1.3), 1e-14));
    CHECK_THAT(spheroid_area(1.0, 0.7), WithinRel(oblate_area(1.0, 0.7), 1e-14));
    CHECK_THAT(spheroid_area(1.0, 1.0), WithinRel(4 * pi, 1e-14));
    const QuadSurface q = discretize(make_spheroid(1.0, 1.3), 24, 48);
    CHECK_THAT(q.area(), WithinRel(prolate_area(1.0, 1.3), 1e-5));
}

TEST_CASE("spheroid radius matches the implicit equation", "[geom]")
{
    const SurfaceSpec s = make_spheroid(1.0, 1.3);
    for (double t : {0.1, 0.8, 1.5, 2.9})
    {
        const Vec3 p = s.evaluate(direction(t, 0.4)).point;
        const double f = (p.x() * p.x() + p.y() * p.y()) + p.z() * p.z() / (1.3 * 1.3);
        CHECK_THAT(f, WithinAbs(1.0, 1e-6));
    }
}

TEST_CASE("analytic normals are orthogonal to finite-difference tangents", "[geom][property]")
{
    const SurfaceSpec s = make_perturbed_sphere(1.0, {{2, 0, 0.2}, {3, 2, 0.1}, {1, -1, 0.05}});
    const double h = 1e-6;
    for (double t : {0.3, 1.1, 2.4})
        for (double p : {0.0, 2.0, 4.5})
        {
            const SurfacePoint sp = s.evaluate(direction(t, p));
            const Vec3 xt = (s.evaluate(direction(t + h, p)).point - s.evaluate(direction(t - h, p)).point) / (2 * h);
            const Vec3 xp = (s.evaluate(direction(t, p + h)).point - s.evaluate(direction(t, p - h)).point) / (2 * h);
            CHECK_THAT(sp.normal.norm(), WithinAbs(1.0, 1e-13));
            CHECK(std::abs(sp.normal.dot(xt)) < 1e-7 * xt.norm());
            CHECK(std::abs(sp.normal.dot(xp)) < 1e-7 * xp.norm());
            // outward: points away from the center
            CHECK(sp.normal.dot(sp.point - s.center()) > 0.0);
            // jacobian = |x_t x x_p| / sin(t)
            CHECK_THAT(sp.jacobian, WithinRel(xt.cross(xp).norm() / std::sin(t), 1e-7));
        }
}

TEST_CASE("translation moves nodes and keeps weights", "[geom][property]")
{
    const SurfaceSpec s = make_perturbed_sphere(1.0, {{2, 1, 0.1}});
    const Vec3 d(0.3, -2.0, 1.0);
    const QuadSurface a = discretize(s, 10, 20);
    const QuadSurface b = discretize(s.translated(d), 10, 20);
    for (std::size_t j = 0; j < a.size(); ++j)
    {
        CHECK((b.nodes[j] - a.nodes[j] - d).norm() < 1e-13);
        CHECK((b.normals[j] - a.normals[j]).norm() < 1e-14);
        CHECK_THAT(b.weights[j], WithinRel(a.weights[j], 1e-14));
    }
    CHECK(((s.translated(d).center()) - d).norm() < 1e-15);
}

TEST_CASE("star-shapedness and coefficient checks", "[geom]")
{
    CHECK_THROWS_AS(make_sphere(-1.0), GeometryError);
    CHECK_THROWS_AS(make_perturbed_sphere(1.0, {{2, 0, 5.0}}), GeometryError);
    CHECK_THROWS_AS(SurfaceSpec("bad", Vec3::Zero(), 2, {1.0, 0.0}), GeometryError);
    CHECK_THROWS_AS(discretize(make_sphere(1.0), 2, 4), GeometryError);
}

TEST_CASE("containment and radial gap", "[geom]")
{
    const SurfaceSpec s = make_sphere(2.0, Vec3(1, 0, 0));
    CHECK(s.contains(Vec3(1, 0, 0.5)));
    CHECK_FALSE(s.contains(Vec3(1, 0, 2.5)));
    CHECK_THAT(s.radial_gap(Vec3(4, 0, 0)), WithinAbs(1.0, 1e-14));
    CHECK(s.is_sphere());
    CHECK_THAT(s.mean_radius(), WithinRel(2.0, 1e-14));
    CHECK_FALSE(make_spheroid(1.0, 1.3).is_sphere());
}

TEST_CASE("projection of a radius function", "[geom]")
{
    const SurfaceSpec s = SurfaceSpec::from_radius_function(
        "p", Vec3::Zero(), 4, [](const Vec3 &p) { return 1.0 + 0.1 * p.z() * p.z(); });
    for (int l = 3; l <= 4; ++l)
        for (int m = -l; m <= l; ++m)
            CHECK(std::abs(s.coeff(l, m)) < 1e-13);
    for (double t : {0.2, 1.0, 2.0})
    {
        const double c = std::cos(t);
        CHECK_THAT(s.radius(t, 0.7), WithinAbs(1.0 + 0.1 * c * c, 1e-12));
    }
}

TEST_CASE("area converges under refinement", "[geom][property]")
{
    const SurfaceSpec s = make_perturbed_sphere(1.0, {{2, 0, 0.2}, {3, 1, 0.05}});
    const double ref = discretize(s, 40, 80).area();
    const double e1 = std::abs(discretize(s, 8, 16).area() - ref);
    const double e2 = std::abs(discretize(s, 16, 32).area() - ref);
    CHECK(e2 < e1);
    CHECK(e2 < 1e-6 * ref);
}
