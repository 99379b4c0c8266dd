// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include "helmscat/fields.hpp"
#include "helmscat/oracle.hpp"

using namespace helmscat;

namespace
{

const Vec3 ez(0.0, 0.0, 1.0);

const QuadSurface &unit_sphere_12()
{
    static const QuadSurface q = discretize(make_sphere(1.0), 12, 24);
    return q;
}

} // namespace

TEST_CASE("boundary condition and incidence parsing", "[solver]")
{
    CHECK(parse_bc_kind("dirichlet") == BcKind::dirichlet);
    CHECK(parse_bc_kind("neumann") == BcKind::neumann);
    CHECK(parse_bc_kind("impedance") == BcKind::impedance);
    CHECK_THROWS_AS(parse_bc_kind("robin2"), DomainError);
    CHECK(to_string(BcKind::neumann) == "neumann");
    CHECK_THROWS_AS(Incidence::plane_wave(Vec3(1.0, 1.0, 0.0)), DomainError);
    const Incidence pw = Incidence::plane_wave(ez);
    CHECK(std::abs(pw.field(Vec3(0, 0, 2), 1.5) - std::exp(I * 3.0)) < 1e-15);
    const Vec3 n = Vec3(1, 2, 2).normalized();
    CHECK(std::abs(pw.normal_derivative(Vec3(0.3, 0, 0.1), n, 1.5) - I * 1.5 * n.z() * std::exp(I * 0.15)) < 1e-14);
}

TEST_CASE("Dirichlet sphere far field agrees with the series", "[solver]")
{
    const SphereGrid g = sphere_grid(12, 24);
    for (const BoundaryCondition &bc :
         {BoundaryCondition::dirichlet(), BoundaryCondition::neumann(), BoundaryCondition::impedance({0.3, 0.2})})
    {
        const BoundarySolution sol = solve_scattering(unit_sphere_12(), bc, Incidence::plane_wave(ez), Wavenumber(1.0));
        const FarFieldPattern mie = mie_far_field(1.0, bc, Wavenumber(1.0), ez, g);
        CHECK(relative_l2(far_field(sol, g), mie) < 1e-3);
        CHECK(sol.residual < 1e-10);
        CHECK(sol.condition_estimate > 1.0);
    }
}

TEST_CASE("impedance with h = 0 is the Neumann problem", "[solver]")
{
    const BoundarySolution n =
        solve_scattering(unit_sphere_12(), BoundaryCondition::neumann(), Incidence::plane_wave(ez), Wavenumber(1.0));
    const BoundarySolution z = solve_scattering(unit_sphere_12(), BoundaryCondition::impedance({0.0, 0.0}),
                                                Incidence::plane_wave(ez), Wavenumber(1.0));
    CHECK((n.density - z.density).norm() < 1e-10 * n.density.norm());
}

TEST_CASE("boundary traces satisfy the boundary condition", "[solver]")
{
    const BoundaryCondition h = BoundaryCondition::impedance({0.5, 0.1});
    const BoundarySolution s = solve_scattering(unit_sphere_12(), h, Incidence::plane_wave(ez), Wavenumber(1.0));
    for (std::size_t j = 0; j < s.surface->size(); j += 17)
        CHECK(std::abs(s.un_trace(j) + h.h * s.u_trace(j)) < 1e-12);
    const BoundarySolution d = solve_scattering(unit_sphere_12(), BoundaryCondition::dirichlet(),
                                                Incidence::plane_wave(ez), Wavenumber(1.0));
    for (std::size_t j = 0; j < d.surface->size(); j += 17)
    {
        CHECK(std::abs(d.u_trace(j)) < 1e-14);
        const MieField f = mie_total_field(1.0, d.bc, Wavenumber(1.0), ez, d.surface->nodes[j]);
        CHECK(std::abs(d.un_trace(j) - f.u_r) < 1e-3 * (1.0 + std::abs(f.u_r)));
    }
}

TEST_CASE("axisymmetric problem gives an axisymmetric density", "[solver][property]")
{
    const QuadSurface &q = unit_sphere_12();
    const BoundarySolution s =
        solve_scattering(q, BoundaryCondition::dirichlet(), Incidence::point_source(Vec3(0, 0, 3)), Wavenumber(1.2));
    for (int a = 0; a < q.n_theta; ++a)
        for (int b = 1; b < q.n_phi; ++b)
            CHECK(std::abs(s.density[a * q.n_phi + b] - s.density[a * q.n_phi]) <
                  1e-10 * std::abs(s.density[a * q.n_phi]));
}

TEST_CASE("solves are deterministic", "[solver]")
{
    const QuadSurface q = discretize(make_spheroid(1.0, 1.3), 10, 20);
    const auto a = solve_scattering(q, BoundaryCondition::neumann(), Incidence::plane_wave(ez), Wavenumber(1.0));
    const auto b = solve_scattering(q, BoundaryCondition::neumann(), Incidence::plane_wave(ez), Wavenumber(1.0));
    REQUIRE(a.density.size() == b.density.size());
    for (Eigen::Index j = 0; j < a.density.size(); ++j)
        CHECK(a.density[j] == b.density[j]);
}

TEST_CASE("low-frequency limit: Neumann trace tends to one", "[solver]")
{
    const BoundarySolution s = solve_scattering(unit_sphere_12(), BoundaryCondition::neumann(),
                                                Incidence::plane_wave(ez), Wavenumber(1e-3));
    for (Eigen::Index j = 0; j < s.density.size(); ++j)
        CHECK(std::abs(s.density[j] - 1.0) < 1e-2);
}

TEST_CASE("operator is linear in the right-hand side", "[solver][property]")
{
    const BoundaryOperator op(unit_sphere_12(), BoundaryCondition::dirichlet(), Wavenumber(1.0));
    const VecC b1 = op.rhs(Incidence::plane_wave(ez));
    const VecC b2 = op.rhs(Incidence::plane_wave(Vec3(1, 0, 0)));
    const cplx c(0.3, -1.2);
    const VecC lhs = op.solve_rhs(b1 + c * b2);
    const VecC rhs = op.solve_rhs(b1) + c * op.solve_rhs(b2);
    CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
    CHECK((op.matrix() * op.solve_rhs(b1) - b1).norm() < 1e-12 * b1.norm());
}

TEST_CASE("resource and geometry guards", "[solver]")
{
    SolverOptions small;
    small.max_nodes = 100;
    CHECK_THROWS_AS(solve_scattering(unit_sphere_12(), BoundaryCondition::dirichlet(), Incidence::plane_wave(ez),
                                     Wavenumber(1.0), small),
                    Error);
    const BoundaryOperator op(unit_sphere_12(), BoundaryCondition::dirichlet(), Wavenumber(1.0));
    CHECK_THROWS_AS(op.solve(Incidence::point_source(Vec3(0, 0, 0.5))), GeometryError);
    CHECK_THROWS_AS(op.solve(Incidence::point_source(Vec3(0, 0, 1.01))), GeometryError);
}

TEST_CASE("interior resonance guard", "[solver]")
{
    const SurfaceSpec sphere = make_sphere(1.0);
    SECTION("k = pi is a zero of j_0")
    {
        const ResonanceAdvisory a = interior_resonance_guard(sphere, Wavenumber(pi), BoundaryCondition::neumann());
        CHECK(a.warning);
        REQUIRE(a.nearest_zero);
        CHECK(std::abs(*a.nearest_zero - pi) < 1e-8);
        CHECK(interior_resonance_guard(sphere, Wavenumber(pi)).warning);
    }
    SECTION("k = 1 is clear")
    {
        CHECK_FALSE(interior_resonance_guard(sphere, Wavenumber(1.0)).warning);
    }
    SECTION("radius scales the resonance")
    {
        CHECK(interior_resonance_guard(make_sphere(2.0), Wavenumber(pi / 2), BoundaryCondition::neumann()).warning);
    }
    SECTION("non-spheres use the condition monitor")
    {
        const ResonanceAdvisory a = interior_resonance_guard(make_spheroid(1.0, 1.3), Wavenumber(1.0));
        REQUIRE(a.condition_estimate);
        CHECK(*a.condition_estimate > 1.0);
        CHECK_FALSE(a.warning);
    }
    SECTION("solving at a resonance attaches a warning")
    {
        const BoundarySolution s = solve_scattering(unit_sphere_12(), BoundaryCondition::neumann(),
                                                    Incidence::plane_wave(ez), Wavenumber(pi));
        CHECK_FALSE(s.warnings.empty());
    }
}
