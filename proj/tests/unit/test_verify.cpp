// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include "helmscat/io.hpp"
#include "helmscat/oracle.hpp"

using namespace helmscat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

const Vec3 ez(0.0, 0.0, 1.0);

FarFieldPattern band_limited(const SHExpansion &e, const SphereGrid &g)
{
    FarFieldPattern p;
    p.k = 1.0;
    p.n_theta = g.n_theta;
    p.n_phi = g.n_phi;
    p.directions = g.directions;
    p.weights = g.weights;
    for (const Vec3 &d : g.directions)
        p.values.push_back(e(d));
    return p;
}

} // namespace

TEST_CASE("report pass flag follows the residual", "[verify]")
{
    CHECK(IdentityReport("a", 1e-3, 1e-2).pass);
    CHECK(IdentityReport("a", 1e-2, 1e-2).pass);
    CHECK_FALSE(IdentityReport("a", 2e-2, 1e-2).pass);
    CHECK_FALSE(IdentityReport("a", std::nan(""), 1e-2).pass);
    CHECK_FALSE(IdentityReport("a", std::numeric_limits<double>::infinity(), 1e-2).pass);
}

TEST_CASE("fitted exponent of a power law", "[verify]")
{
    const std::vector<double> r{10, 20, 40, 80};
    std::vector<double> v;
    for (double x : r)
        v.push_back(3.0 * std::pow(x, -2.0));
    CHECK_THAT(fitted_exponent(r, v), WithinAbs(-2.0, 1e-12));
}

TEST_CASE("cap grid integrates the cap", "[verify]")
{
    const double t = pi / 3;
    const SphereGrid g = cap_grid(Vec3(1, 1, 0), t, 12, 24);
    double w = 0.0, wz = 0.0;
    const Vec3 axis = Vec3(1, 1, 0).normalized();
    for (std::size_t j = 0; j < g.size(); ++j)
    {
        w += g.weights[j];
        wz += g.weights[j] * axis.dot(g.directions[j]);
        CHECK(axis.dot(g.directions[j]) >= std::cos(t) - 1e-14);
    }
    CHECK_THAT(w, WithinRel(2 * pi * (1 - std::cos(t)), 1e-13));
    CHECK_THAT(wz, WithinRel(pi * std::sin(t) * std::sin(t), 1e-13));
}

TEST_CASE("direction pairs are seeded", "[verify]")
{
    const auto a = random_direction_pairs(5, 7);
    const auto b = random_direction_pairs(5, 7);
    const auto c = random_direction_pairs(5, 8);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i].first == b[i].first);
        CHECK(a[i].second == b[i].second);
        CHECK_THAT(a[i].first.norm(), WithinAbs(1.0, 1e-14));
    }
    CHECK(a[0].first != c[0].first);
}

TEST_CASE("refinement report", "[verify]")
{
    CHECK(check_refinement("r", 1e-3, 1e-4).pass);
    CHECK_FALSE(check_refinement("r", 1e-4, 1e-3).pass);
    CHECK(check_refinement("r", 1e-14, 2e-14).pass); // both at the plateau
}

TEST_CASE("continuation of band-limited cap data", "[verify]")
{
    SHExpansion e(5);
    for (int l = 0; l <= 5; ++l)
        for (int m = -l; m <= l; ++m)
            e.at(l, m) = cplx(1.0 / (1 + l + std::abs(m)), 0.1 * m);
    const FarFieldPattern full = band_limited(e, sphere_grid(16, 32));
    SECTION("60 degree cap recovers the pattern")
    {
        const FarFieldPattern cap = band_limited(e, cap_grid(ez, pi / 3, 14, 28));
        const IdentityReport r = check_continuation(cap, full, 5, 1e-6);
        CHECK(r.pass);
        CHECK(r.residual < 1e-8);
        CHECK(r.meta.at("trustworthy") == "yes");
    }
    SECTION("a narrow cap with a high degree is flagged")
    {
        const FarFieldPattern cap = band_limited(e, cap_grid(ez, 0.15, 14, 28));
        const IdentityReport r = check_continuation(cap, full, 12, 1e-4);
        CHECK(r.meta.at("trustworthy") == "no");
    }
}

TEST_CASE("optical theorem on series data", "[verify]")
{
    const SphereGrid g = sphere_grid(24, 48);
    const FarFieldPattern p = mie_far_field(1.0, BoundaryCondition::dirichlet(), Wavenumber(1.0), ez, g);
    const PartialWaveCoeffs c = partial_wave_coeffs(1.0, BoundaryCondition::dirichlet(), Wavenumber(1.0));
    const IdentityReport r = check_optical_theorem(p, mie_amplitude(c, 1.0, ez, ez), false, 1e-10);
    CHECK(r.pass);
    const BoundaryCondition h = BoundaryCondition::impedance({0.3, 0.5});
    const FarFieldPattern pa = mie_far_field(1.0, h, Wavenumber(1.0), ez, g);
    const PartialWaveCoeffs ca = partial_wave_coeffs(1.0, h, Wavenumber(1.0));
    const IdentityReport ra = check_optical_theorem(pa, mie_amplitude(ca, 1.0, ez, ez), true, 1e-6);
    CHECK(ra.pass);
    CHECK(ra.residual < 1.0);
    // lossless data judged as absorbing fails the strict inequality
    CHECK_FALSE(check_optical_theorem(p, mie_amplitude(c, 1.0, ez, ez), true, 1e-6).pass);
}

TEST_CASE("Lemma 2 checks", "[verify]")
{
    const SphereGrid betas = sphere_grid(3, 6);
    const GridSize grid{10, 20};
    SECTION("identical obstacles give a vanishing difference")
    {
        const IdentityReport r = check_lemma2(make_sphere(1.0), make_sphere(1.0), PairArrangement::disjoint,
                                              Wavenumber(1.0), ez, betas, grid, 1e-6);
        CHECK(r.pass);
        CHECK(r.name == "lemma2.identical");
    }
    SECTION("disjoint pair, either order")
    {
        const SurfaceSpec a = make_sphere(0.6, Vec3(-1.5, 0, 0));
        const SurfaceSpec b = make_sphere(0.6, Vec3(1.5, 0, 0));
        const IdentityReport r1 =
            check_lemma2(a, b, PairArrangement::disjoint, Wavenumber(1.0), ez, betas, grid, 5e-2);
        const IdentityReport r2 =
            check_lemma2(b, a, PairArrangement::disjoint, Wavenumber(1.0), ez, betas, grid, 5e-2);
        CHECK(r1.pass);
        CHECK(r2.pass);
        CHECK_THAT(r1.values.at("lhs_max"), WithinRel(r2.values.at("lhs_max"), 1e-10));
        // same inputs, same bits
        const IdentityReport r3 =
            check_lemma2(a, b, PairArrangement::disjoint, Wavenumber(1.0), ez, betas, grid, 5e-2);
        CHECK(r3.residual == r1.residual);
    }
    SECTION("arrangement preconditions")
    {
        CHECK_THROWS_AS(check_lemma2(make_sphere(1.0), make_sphere(1.0, Vec3(0.5, 0, 0)), PairArrangement::disjoint,
                                     Wavenumber(1.0), ez, betas, grid, 5e-2),
                        GeometryError);
        CHECK_THROWS_AS(check_lemma2(make_sphere(1.0), make_sphere(1.0, Vec3(3, 0, 0)), PairArrangement::nested,
                                     Wavenumber(1.0), ez, betas, grid, 5e-2),
                        GeometryError);
    }
}

TEST_CASE("Lemma 1 on a small sphere", "[verify]")
{
    // for a small obstacle the scattered part is weak; both reports must pass
    const std::vector<Vec3> probes{Vec3(0.6, 0, 0), Vec3(0, 0.6, 0)};
    const std::vector<double> taus{40.0, 80.0, 160.0};
    const auto reps = check_lemma1(make_sphere(0.3), BoundaryCondition::dirichlet(), Wavenumber(0.5), ez,
                                   Vec3::Zero(), probes, taus, GridSize{10, 20}, 1e-2, {}, "small");
    REQUIRE(reps.size() == 2);
    CHECK(reps[0].name == "small.exponent");
    CHECK(reps[1].name == "small.terminal");
    CHECK(reps[0].pass);
    CHECK(reps[1].pass);
}

TEST_CASE("Green's function symmetry check", "[verify]")
{
    const std::vector<std::pair<Vec3, Vec3>> pairs{{Vec3(2, 0, 0), Vec3(0, 0, 2)}, {Vec3(0, 3, 0), Vec3(1, 1, 1)}};
    const IdentityReport r = check_green_symmetry(make_spheroid(1.0, 1.3), BoundaryCondition::dirichlet(),
                                                  Wavenumber(1.0), pairs, GridSize{12, 24}, 1e-2);
    CHECK(r.pass);
}

TEST_CASE("suite plumbing", "[verify]")
{
    const auto names = suite_identities();
    CHECK(names.size() == 28);
    CHECK(std::is_sorted(names.begin(), names.end()));
    CHECK(std::find(names.begin(), names.end(), "oracle.dirichlet") != names.end());
    CHECK_THROWS_AS(run_suite(fast_profile(), "no.such.identity"), DomainError);

    const auto a = run_suite(fast_profile(), "lemma2.identical");
    const auto b = run_suite(fast_profile(), "lemma2.identical");
    REQUIRE(a.size() == 1);
    CHECK(a[0].pass);
    CHECK(a[0].residual == b[0].residual);
    CHECK(a[0].meta.at("profile") == "fast@" + fast_profile().version);
    CHECK(format_reports(a).find("1/1 identities pass") != std::string::npos);
}

TEST_CASE("profiles", "[verify]")
{
    const SuiteProfile f = fast_profile(), s = slow_profile();
    CHECK(f.tolerance("oracle.dirichlet") == 1e-3);
    CHECK(f.tolerance("something.else") == f.default_tolerance);
    CHECK(s.desk.n_theta > f.desk.n_theta);
    for (const std::string n : {"oracle.neumann", "reciprocity.spheroid", "lemma2.disjoint", "flux_limit"})
        CHECK(s.tolerance(n) <= f.tolerance(n));
    CHECK(s.tolerance("lemma1.sphere.terminal") == f.tolerance("lemma1.sphere.terminal"));
}

TEST_CASE("shipped profile files equal the built-in profiles", "[verify]")
{
    const std::string dir = HELMSCAT_CONFIG_DIR;
    CHECK(to_json(profile_from_json(read_json(dir + "/profiles/fast.json"))) == to_json(fast_profile()));
    CHECK(to_json(profile_from_json(read_json(dir + "/profiles/slow.json"))) == to_json(slow_profile()));
}
