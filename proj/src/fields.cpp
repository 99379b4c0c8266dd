// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include "helmscat/fields.hpp"

#include <sstream>

#include "helmscat/kernels.hpp"

namespace helmscat
{

double FarFieldPattern::norm_squared() const
{
    if (!has_grid())
        throw DomainError("far-field pattern has no quadrature weights");
    double s = 0.0;
    for (std::size_t j = 0; j < size(); ++j)
        s += weights[j] * std::norm(values[j]);
    return s;
}

double relative_l2(std::span<const cplx> a, std::span<const cplx> b, std::span<const double> w)
{
    if (a.size() != b.size() || (!w.empty() && w.size() != a.size()))
        throw DomainError("relative_l2: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
    {
        const double wj = w.empty() ? 1.0 : w[j];
        num += wj * std::norm(a[j] - b[j]);
        den += wj * std::norm(b[j]);
    }
    if (den == 0.0)
        return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

double relative_l2(const FarFieldPattern &a, const FarFieldPattern &b)
{
    if (a.size() != b.size())
        throw DomainError("relative_l2: patterns have different sizes");
    for (std::size_t j = 0; j < a.size(); ++j)
        if ((a.directions[j] - b.directions[j]).norm() > 1e-12)
            throw DomainError("relative_l2: patterns sampled on different directions");
    return relative_l2(a.values, b.values, b.weights);
}

bool near_surface(const QuadSurface &q, const Vec3 &x)
{
    if (q.spec.radial_gap(x) <= 0.0)
        throw GeometryError("evaluation point lies inside the obstacle '" + q.spec.label() + "'");
    return q.node_distance(x) < q.panel_diameter;
}

namespace
{

cplx scattered_at(const BoundarySolution &sol, const Vec3 &x)
{
    const QuadSurface &q = *sol.surface;
    const double k = sol.k;
    cplx v{};
    for (std::size_t j = 0; j < q.size(); ++j)
    {
        const Vec3 d = q.nodes[j] - x;
        const double r = d.norm();
        if (!(r > 0.0))
            throw GeometryError("field evaluated at a quadrature node");
        const cplx g = std::polar(1.0 / (4.0 * pi * r), k * r);
        const cplx gn = g * cplx(-1.0 / r, k) * (d.dot(q.normals[j]) / r);
        v += q.weights[j] * (sol.u_trace(j) * gn - sol.un_trace(j) * g);
    }
    return v;
}

void check_points(const BoundarySolution &sol, std::span<const Vec3> xs, PointCheck check)
{
    if (check == PointCheck::unchecked)
        return;
    std::size_t near = 0;
    for (const Vec3 &x : xs)
        near += near_surface(*sol.surface, x) ? 1 : 0;
    if (near > 0)
        warn(std::to_string(near) + " evaluation point(s) closer than one panel diameter to '" +
             sol.surface->spec.label() + "'; near-field accuracy degrades");
}

} // namespace

cplx eval_scattered(const BoundarySolution &sol, const Vec3 &x, PointCheck check)
{
    check_points(sol, std::span(&x, 1), check);
    return scattered_at(sol, x);
}

cplx eval_total(const BoundarySolution &sol, const Vec3 &x, PointCheck check)
{
    return sol.incidence.field(x, sol.k) + eval_scattered(sol, x, check);
}

CVec3 eval_scattered_gradient(const BoundarySolution &sol, const Vec3 &x, PointCheck check)
{
    check_points(sol, std::span(&x, 1), check);
    const QuadSurface &q = *sol.surface;
    CVec3 g = CVec3::Zero();
    for (std::size_t j = 0; j < q.size(); ++j)
        g += q.weights[j] * (sol.u_trace(j) * kernel_g_normal_gradient(x, q.nodes[j], q.normals[j], sol.k) -
                             sol.un_trace(j) * kernel_g_gradient(x, q.nodes[j], sol.k));
    return g;
}

std::vector<cplx> eval_scattered(const BoundarySolution &sol, std::span<const Vec3> xs, PointCheck check)
{
    check_points(sol, xs, check);
    std::vector<cplx> out(xs.size());
    const long n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static) num_threads(worker_threads())
    for (long i = 0; i < n; ++i)
        out[i] = scattered_at(sol, xs[i]);
    return out;
}

std::vector<cplx> eval_total(const BoundarySolution &sol, std::span<const Vec3> xs, PointCheck check)
{
    std::vector<cplx> out = eval_scattered(sol, xs, check);
    for (std::size_t i = 0; i < xs.size(); ++i)
        out[i] += sol.incidence.field(xs[i], sol.k);
    return out;
}

cplx far_field_value(const BoundarySolution &sol, const Vec3 &beta)
{
    const QuadSurface &q = *sol.surface;
    const double k = sol.k;
    cplx a{};
    for (std::size_t j = 0; j < q.size(); ++j)
    {
        const cplx e = farfield_kernel(beta, q.nodes[j], k);
        const cplx en = -I * k * beta.dot(q.normals[j]) * e;
        a += q.weights[j] * (sol.u_trace(j) * en - sol.un_trace(j) * e);
    }
    return a / (4.0 * pi);
}

FarFieldPattern far_field(const BoundarySolution &sol, std::span<const Vec3> directions)
{
    FarFieldPattern p;
    p.k = sol.k;
    if (sol.incidence.is_plane_wave())
        p.alpha = sol.incidence.direction();
    p.directions.assign(directions.begin(), directions.end());
    p.values.resize(directions.size());
    const long n = static_cast<long>(directions.size());
#pragma omp parallel for schedule(static) num_threads(worker_threads())
    for (long i = 0; i < n; ++i)
        p.values[i] = far_field_value(sol, directions[i]);
    return p;
}

FarFieldPattern far_field(const BoundarySolution &sol, const SphereGrid &grid)
{
    FarFieldPattern p = far_field(sol, std::span<const Vec3>(grid.directions));
    p.n_theta = grid.n_theta;
    p.n_phi = grid.n_phi;
    p.weights = grid.weights;
    return p;
}

// ---------------------------------------------------------------------------

GreensFunction::GreensFunction(const SurfaceSpec &spec, const BoundaryCondition &bc, Wavenumber k, int n_theta,
                               int n_phi, const SolverOptions &opts)
    : op_(std::make_shared<const QuadSurface>(discretize(spec, n_theta, n_phi)), bc, k, opts)
{
}

BoundarySolution GreensFunction::source_solution(const Vec3 &y) const
{
    return op_.solve(Incidence::point_source(y));
}

GreensSample GreensFunction::operator()(const Vec3 &x, const Vec3 &y) const
{
    if ((x - y).norm() == 0.0)
        throw GeometryError("greens_function: coincident points");
    const BoundarySolution sol = source_solution(y);
    return {x, y, kernel_g(x, y, op_.k()) + eval_scattered(sol, x)};
}

GreensSample greens_function(const SurfaceSpec &spec, const BoundaryCondition &bc, Wavenumber k, const Vec3 &x,
                             const Vec3 &y, int n_theta, int n_phi, const SolverOptions &opts)
{
    return GreensFunction(spec, bc, k, n_theta, n_phi, opts)(x, y);
}

std::vector<SourceLimitSnapshot> scattering_solution_from_source_limit(const GreensFunction &green,
                                                                       const Vec3 &alpha0,
                                                                       std::span<const double> taus, const Vec3 &eta,
                                                                       std::span<const Vec3> probes)
{
    const double k = green.op().k();
    double probe_radius = 0.0;
    for (const Vec3 &x : probes)
        probe_radius = std::max(probe_radius, x.norm());

    std::vector<SourceLimitSnapshot> out;
    for (std::size_t t = 0; t < taus.size(); ++t)
    {
        if (t > 0 && !(taus[t] > taus[t - 1]))
            throw DomainError("source limit: tau values must increase");
        SourceLimitSnapshot s;
        s.tau = taus[t];
        s.source = -taus[t] * alpha0 + eta;
        const double ry = s.source.norm();
        if (ry <= probe_radius)
            throw GeometryError("source limit: source inside the bounding sphere of the probes");
        const BoundarySolution sol = green.source_solution(s.source);
        const std::vector<cplx> v = eval_scattered(sol, probes);
        const cplx g_y = std::polar(1.0 / (4.0 * pi * ry), k * ry);
        for (std::size_t j = 0; j < probes.size(); ++j)
        {
            const cplx gv = kernel_g(probes[j], s.source, k) + v[j];
            s.greens.push_back(gv);
            s.renormalized.push_back(gv / g_y);
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace helmscat
