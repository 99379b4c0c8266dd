// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include "helmscat/geom.hpp"

#include <limits>

#include "helmscat/quadrature.hpp"

namespace helmscat
{

namespace
{

int compute_effective_degree(int degree, const std::vector<double> &c)
{
    for (int l = degree; l > 0; --l)
        for (int m = -l; m <= l; ++m)
            if (c[sh_index(l, m)] != 0.0)
                return l;
    return 0;
}

} // namespace

SurfaceSpec::SurfaceSpec(std::string label, Vec3 center, int degree, std::vector<double> coeffs)
    : label_(std::move(label)), center_(std::move(center)), degree_(degree), coeffs_(std::move(coeffs))
{
    if (degree_ < 0)
        throw GeometryError("surface degree must be non-negative");
    if (coeffs_.size() != static_cast<std::size_t>(sh_count(degree_)))
        throw GeometryError("surface '" + label_ + "': expected " + std::to_string(sh_count(degree_)) +
                            " coefficients, got " + std::to_string(coeffs_.size()));
    for (double c : coeffs_)
        if (!std::isfinite(c))
            throw GeometryError("surface '" + label_ + "': non-finite coefficient");
    if (!(coeffs_[0] > 0.0))
        throw GeometryError("surface '" + label_ + "': c00 must be positive");
    if (!center_.allFinite())
        throw GeometryError("surface '" + label_ + "': non-finite center");
    effective_degree_ = compute_effective_degree(degree_, coeffs_);

    // star-shapedness on a grid that resolves the expansion
    r_min_ = std::numeric_limits<double>::infinity();
    r_max_ = 0.0;
    if (effective_degree_ == 0)
    {
        r_min_ = r_max_ = mean_radius();
        return;
    }
    const int nt = 2 * effective_degree_ + 8;
    const SphereGrid g = sphere_grid(nt, 2 * nt);
    for (const Vec3 &d : g.directions)
    {
        const double r = radius(d);
        r_min_ = std::min(r_min_, r);
        r_max_ = std::max(r_max_, r);
    }
    if (!(r_min_ > 0.0))
        throw GeometryError("surface '" + label_ + "' is not star-shaped: r <= 0 on the check grid");
}

SurfaceSpec SurfaceSpec::from_radius_function(std::string label, Vec3 center, int degree,
                                              const std::function<double(const Vec3 &)> &radius)
{
    // exact for band-limited r up to the grid's resolution
    const int nt = std::max(64, 2 * degree + 16);
    const SphereGrid g = sphere_grid(nt, 2 * nt);
    const int nb = sh_count(degree);
    std::vector<double> c(nb, 0.0), y(nb);
    for (std::size_t j = 0; j < g.size(); ++j)
    {
        const double r = radius(g.directions[j]);
        real_sph_harmonics(degree, g.directions[j], y);
        for (int b = 0; b < nb; ++b)
            c[b] += g.weights[j] * r * y[b];
    }
    for (double &v : c)
        if (std::abs(v) < 1e-15)
            v = 0.0;
    return SurfaceSpec(std::move(label), std::move(center), degree, std::move(c));
}

double SurfaceSpec::coeff(int l, int m) const
{
    if (l < 0 || l > degree_ || std::abs(m) > l)
        throw GeometryError("coefficient index out of range");
    return coeffs_[sh_index(l, m)];
}

double SurfaceSpec::radius(const Vec3 &dir) const
{
    if (effective_degree_ == 0)
        return mean_radius();
    std::vector<double> y(sh_count(effective_degree_));
    real_sph_harmonics(effective_degree_, dir, y);
    double r = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        r += coeffs_[i] * y[i];
    return r;
}

SurfacePoint SurfaceSpec::evaluate(const Vec3 &dir_in) const
{
    const Vec3 dir = dir_in.normalized();
    const double s = std::hypot(dir.x(), dir.y());
    double cp = 1.0, sp = 0.0;
    if (s > 0.0)
    {
        cp = dir.x() / s;
        sp = dir.y() / s;
    }
    AssociatedLegendre table(effective_degree_ + 1);
    table.compute(dir.z(), s, true);
    return evaluate(dir, table, cp, sp);
}

SurfacePoint SurfaceSpec::evaluate(const Vec3 &dir, const AssociatedLegendre &table, double cp, double sp) const
{
    const int L = effective_degree_;
    const double ct = dir.z();
    const double st = std::hypot(dir.x(), dir.y());

    double r = coeffs_[0] * table.p(0, 0);
    double r_t = 0.0;  // dr/dtheta
    double r_ps = 0.0; // (dr/dphi) / sin(theta)
    const double r2 = std::sqrt(2.0);
    double cm = 1.0, sm = 0.0;
    for (int m = 0; m <= L; ++m)
    {
        for (int l = std::max(m, 1); l <= L; ++l)
        {
            if (m == 0)
            {
                const double c = coeffs_[sh_index(l, 0)];
                r += c * table.p(l, 0);
                r_t += c * table.dp_dtheta(l, 0);
                continue;
            }
            const double cc = coeffs_[sh_index(l, m)];
            const double cs = coeffs_[sh_index(l, -m)];
            if (cc == 0.0 && cs == 0.0)
                continue;
            const double trig = cc * cm + cs * sm;
            const double dtrig = m * (cs * cm - cc * sm);
            r += r2 * table.p(l, m) * trig;
            r_t += r2 * table.dp_dtheta(l, m) * trig;
            r_ps += r2 * table.p_over_sin(l, m) * dtrig;
        }
        const double c = cm * cp - sm * sp;
        sm = sm * cp + cm * sp;
        cm = c;
    }

    const Vec3 e_t(ct * cp, ct * sp, -st);
    const Vec3 e_p(-sp, cp, 0.0);
    const double g = std::sqrt(r * r + r_t * r_t + r_ps * r_ps);
    SurfacePoint pt;
    pt.radius = r;
    pt.point = center_ + r * dir;
    pt.normal = (r * dir - r_t * e_t - r_ps * e_p) / g;
    pt.jacobian = r * g;
    return pt;
}

double SurfaceSpec::radial_gap(const Vec3 &x) const
{
    const Vec3 d = x - center_;
    const double n = d.norm();
    if (n == 0.0)
        return -mean_radius();
    return n - radius(d / n);
}

SurfaceSpec SurfaceSpec::translated(const Vec3 &shift) const
{
    SurfaceSpec s = *this;
    s.center_ += shift;
    return s;
}

SurfaceSpec SurfaceSpec::with_coeffs(std::vector<double> coeffs) const
{
    const int degree = static_cast<int>(std::lround(std::sqrt(double(coeffs.size())))) - 1;
    return SurfaceSpec(label_, center_, degree, std::move(coeffs));
}

SurfaceSpec SurfaceSpec::with_label(std::string label) const
{
    SurfaceSpec s = *this;
    s.label_ = std::move(label);
    return s;
}

// ---------------------------------------------------------------------------

SurfaceSpec make_sphere(double radius, const Vec3 &center, int degree)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw GeometryError("make_sphere: radius must be positive");
    std::vector<double> c(sh_count(degree), 0.0);
    c[0] = radius * std::sqrt(4.0 * pi);
    return SurfaceSpec("sphere", center, degree, std::move(c));
}

SurfaceSpec make_spheroid(double a, double c, const Vec3 &center, int degree)
{
    if (!(a > 0.0) || !(c > 0.0))
        throw GeometryError("make_spheroid: semi-axes must be positive");
    auto r = [a, c](const Vec3 &d) {
        const double s2 = d.x() * d.x() + d.y() * d.y();
        return 1.0 / std::sqrt(s2 / (a * a) + d.z() * d.z() / (c * c));
    };
    return SurfaceSpec::from_radius_function("spheroid", center, degree, r);
}

SurfaceSpec make_perturbed_sphere(double r0, std::initializer_list<HarmonicBump> bumps, const Vec3 &center,
                                  int degree)
{
    std::vector<double> c(sh_count(degree), 0.0);
    c[0] = r0 * std::sqrt(4.0 * pi);
    for (const HarmonicBump &b : bumps)
    {
        if (b.l < 1 || b.l > degree || std::abs(b.m) > b.l)
            throw GeometryError("make_perturbed_sphere: harmonic index out of range");
        c[sh_index(b.l, b.m)] += b.amplitude;
    }
    return SurfaceSpec("perturbed-sphere", center, degree, std::move(c));
}

double spheroid_area(double a, double c)
{
    if (std::abs(a - c) < 1e-14 * a)
        return 4.0 * pi * a * a;
    if (c > a)
    {
        const double e = std::sqrt(1.0 - a * a / (c * c));
        return 2.0 * pi * a * a * (1.0 + c / (a * e) * std::asin(e));
    }
    const double e = std::sqrt(1.0 - c * c / (a * a));
    return 2.0 * pi * a * a * (1.0 + (1.0 - e * e) / e * std::atanh(e));
}

// ---------------------------------------------------------------------------

double QuadSurface::area() const
{
    double s = 0.0;
    for (double w : weights)
        s += w;
    return s;
}

Vec3 QuadSurface::centroid() const
{
    Vec3 c = Vec3::Zero();
    for (std::size_t j = 0; j < size(); ++j)
        c += weights[j] * nodes[j];
    return c / area();
}

double QuadSurface::node_distance(const Vec3 &x) const
{
    double d = std::numeric_limits<double>::infinity();
    for (const Vec3 &n : nodes)
        d = std::min(d, (x - n).norm());
    return d;
}

QuadSurface discretize(const SurfaceSpec &spec, int n_theta, int n_phi)
{
    if (n_theta < 4 || n_phi < 8)
        throw GeometryError("discretize: need n_theta >= 4 and n_phi >= 8");

    const SphereGrid grid = sphere_grid(n_theta, n_phi);
    QuadSurface q{spec, n_theta, n_phi, grid.directions, grid.weights, {}, {}, {}, {}, 0.0};
    const std::size_t n = grid.size();
    q.nodes.resize(n);
    q.normals.resize(n);
    q.jacobians.resize(n);
    q.weights.resize(n);

    // local theta spacing per ring
    std::vector<double> dtheta(n_theta);
    for (int a = 0; a < n_theta; ++a)
    {
        const double t = grid.theta[a * n_phi];
        const double lo = (a == 0) ? 0.0 : grid.theta[(a - 1) * n_phi];
        const double hi = (a == n_theta - 1) ? pi : grid.theta[(a + 1) * n_phi];
        dtheta[a] = std::max(t - lo, hi - t);
    }
    const double dphi = 2.0 * pi / n_phi;

    for (std::size_t j = 0; j < n; ++j)
    {
        const SurfacePoint p = spec.evaluate(grid.directions[j]);
        if (!(p.radius > 0.0))
            throw GeometryError("discretize: surface '" + spec.label() + "' is not star-shaped at node " +
                                std::to_string(j));
        q.nodes[j] = p.point;
        q.normals[j] = p.normal;
        q.jacobians[j] = p.jacobian;
        q.weights[j] = grid.weights[j] * p.jacobian;
        const int a = static_cast<int>(j) / n_phi;
        const double st = std::sin(grid.theta[j]);
        const double h = std::sqrt(dtheta[a] * dtheta[a] + st * st * dphi * dphi) * std::sqrt(p.jacobian);
        q.panel_diameter = std::max(q.panel_diameter, h);
    }
    return q;
}

} // namespace helmscat
