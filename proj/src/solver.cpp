// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include "helmscat/solver.hpp"

#include <cstdlib>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "helmscat/kernels.hpp"
#include "helmscat/quadrature.hpp"

namespace helmscat
{

std::string to_string(BcKind kind)
{
    switch (kind)
    {
    case BcKind::dirichlet:
        return "dirichlet";
    case BcKind::neumann:
        return "neumann";
    case BcKind::impedance:
        return "impedance";
    }
    return "?";
}

BcKind parse_bc_kind(const std::string &name)
{
    if (name == "dirichlet")
        return BcKind::dirichlet;
    if (name == "neumann")
        return BcKind::neumann;
    if (name == "impedance")
        return BcKind::impedance;
    throw DomainError("unknown boundary condition '" + name + "'");
}

BoundaryCondition BoundaryCondition::impedance(cplx h)
{
    if (h.imag() < 0.0 || !std::isfinite(h.real()) || !std::isfinite(h.imag()))
        throw DomainError("impedance requires finite h with Im h >= 0");
    return {BcKind::impedance, h};
}

std::string BoundaryCondition::describe() const
{
    if (kind != BcKind::impedance)
        return to_string(kind);
    std::ostringstream os;
    os << "impedance(h=" << h.real() << (h.imag() < 0 ? "-" : "+") << std::abs(h.imag()) << "i)";
    return os.str();
}

// ---------------------------------------------------------------------------

Incidence Incidence::plane_wave(const Vec3 &alpha)
{
    const double n = alpha.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-8)
        throw DomainError("plane-wave direction must be a unit vector");
    return Incidence(PlaneWave{alpha / n});
}

Incidence Incidence::point_source(const Vec3 &y0)
{
    if (!y0.allFinite())
        throw DomainError("point source position must be finite");
    return Incidence(PointSource{y0});
}

cplx Incidence::field(const Vec3 &x, double k) const
{
    if (is_plane_wave())
        return std::polar(1.0, k * direction().dot(x));
    return kernel_g(x, source(), k);
}

CVec3 Incidence::gradient(const Vec3 &x, double k) const
{
    if (is_plane_wave())
        return (I * k * std::polar(1.0, k * direction().dot(x))) * direction().cast<cplx>();
    return kernel_g_gradient(x, source(), k);
}

std::string Incidence::describe() const
{
    std::ostringstream os;
    os.precision(17);
    if (is_plane_wave())
        os << "plane(" << direction().x() << "," << direction().y() << "," << direction().z() << ")";
    else
        os << "point(" << source().x() << "," << source().y() << "," << source().z() << ")";
    return os.str();
}

// ---------------------------------------------------------------------------

int worker_threads()
{
    if (const char *env = std::getenv("HELMSCAT_THREADS"))
    {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace
{

int interpolation_degree(const QuadSurface &q)
{
    return std::min(q.n_theta - 1, (q.n_phi - 1) / 2);
}

/// Orthonormal frame (e1, e2, p).
std::pair<Vec3, Vec3> frame(const Vec3 &p)
{
    const Vec3 ref = std::abs(p.z()) < 0.9 ? Vec3(0.0, 0.0, 1.0) : Vec3(1.0, 0.0, 0.0);
    const Vec3 e1 = ref.cross(p).normalized();
    return {e1, p.cross(e1)};
}

/// Real harmonics up to degree L from a filled Legendre table.
void real_harmonics_from_table(int L, const AssociatedLegendre &t, double cp, double sp, double *out)
{
    const double r2 = std::sqrt(2.0);
    for (int l = 0; l <= L; ++l)
        out[sh_index(l, 0)] = t.p(l, 0);
    double cm = 1.0, sm = 0.0;
    for (int m = 1; m <= L; ++m)
    {
        const double c = cm * cp - sm * sp;
        sm = sm * cp + cm * sp;
        cm = c;
        for (int l = m; l <= L; ++l)
        {
            const double v = r2 * t.p(l, m);
            out[sh_index(l, m)] = v * cm;
            out[sh_index(l, -m)] = v * sm;
        }
    }
}

} // namespace

std::pair<int, int> polar_rule_size(const QuadSurface &q, const SolverOptions &opts)
{
    const int nt = opts.polar_theta > 0 ? opts.polar_theta : q.n_theta + 8;
    const int np = opts.polar_phi > 0 ? opts.polar_phi : q.n_phi + 8;
    return {nt, np};
}

MatC assemble_matrix(const QuadSurface &q, const BoundaryCondition &bc, Wavenumber kw, const SolverOptions &opts)
{
    const double k = kw.value();
    const std::size_t n = q.size();
    if (n > opts.max_nodes)
        throw SolverError("assemble_matrix: " + std::to_string(n) + " nodes exceeds the cap of " +
                          std::to_string(opts.max_nodes));

    const int L = interpolation_degree(q);
    const int nb = sh_count(L);
    const SurfaceSpec &spec = q.spec;
    const int lg = spec.effective_degree();
    const int lt = std::max(L, lg);

    // grid projection onto harmonics: coefficient_b = sum_j proj(j, b) phi_j
    Eigen::MatrixXd proj(n, nb);
    {
        std::vector<double> y(nb);
        for (std::size_t j = 0; j < n; ++j)
        {
            real_sph_harmonics(L, q.directions[j], y);
            for (int b = 0; b < nb; ++b)
                proj(j, b) = q.solid_weights[j] * y[b];
        }
    }

    // polar rule around the north pole of a local frame
    const auto [pt, pp] = polar_rule_size(q, opts);
    const GaussLegendre gl = gauss_legendre(pt);
    const int m_pts = pt * pp;
    std::vector<Vec3> ref_pts(m_pts);
    std::vector<double> ref_w(m_pts);
    for (int a = 0; a < pt; ++a)
    {
        const double th = 0.5 * pi * (gl.nodes[a] + 1.0);
        const double wa = 0.5 * pi * gl.weights[a] * std::sin(th) * (2.0 * pi / pp);
        for (int b = 0; b < pp; ++b)
        {
            const double ph = 2.0 * pi * b / pp;
            ref_pts[a * pp + b] = direction(th, ph);
            ref_w[a * pp + b] = wa;
        }
    }

    Eigen::MatrixXd c_re(n, nb), c_im(n, nb);
    const long n_long = static_cast<long>(n);

#pragma omp parallel num_threads(worker_threads())
    {
        AssociatedLegendre table(lt);
        Eigen::MatrixXd basis(nb, m_pts);
        Eigen::MatrixXd w(m_pts, 2);
        Eigen::MatrixXd c(nb, 2);

#pragma omp for schedule(dynamic, 4)
        for (long i = 0; i < n_long; ++i)
        {
            const Vec3 &p = q.directions[i];
            const Vec3 &x = q.nodes[i];
            const Vec3 &nx = q.normals[i];
            const auto [e1, e2] = frame(p);

            for (int t = 0; t < m_pts; ++t)
            {
                const Vec3 &u = ref_pts[t];
                const Vec3 dir = (u.x() * e1 + u.y() * e2 + u.z() * p).normalized();
                const double st = std::hypot(dir.x(), dir.y());
                double cp = 1.0, sp = 0.0;
                if (st > 0.0)
                {
                    cp = dir.x() / st;
                    sp = dir.y() / st;
                }
                table.compute(dir.z(), st, lg > 0);

                Vec3 y, ny;
                double jac;
                if (lg == 0)
                {
                    const double r = spec.mean_radius();
                    y = spec.center() + r * dir;
                    ny = dir;
                    jac = r * r;
                }
                else
                {
                    const SurfacePoint s = spec.evaluate(dir, table, cp, sp);
                    y = s.point;
                    ny = s.normal;
                    jac = s.jacobian;
                }

                const Vec3 d = x - y;
                const double r = d.norm();
                const cplx g = std::polar(1.0 / (4.0 * pi * r), k * r);
                const cplx g1 = g * cplx(-1.0 / r, k);
                cplx kern;
                switch (bc.kind)
                {
                case BcKind::dirichlet:
                    kern = g1 * (d.dot(nx) / r); // K'
                    break;
                case BcKind::neumann:
                    kern = g1 * (d.dot(ny) / r); // -K
                    break;
                case BcKind::impedance:
                    kern = g1 * (d.dot(ny) / r) - bc.h * g; // -K - hS
                    break;
                }
                kern *= ref_w[t] * jac;
                w(t, 0) = kern.real();
                w(t, 1) = kern.imag();
                real_harmonics_from_table(L, table, cp, sp, basis.col(t).data());
            }

            c.noalias() = basis * w;
            c_re.row(i) = c.col(0).transpose();
            c_im.row(i) = c.col(1).transpose();
        }
    }

    MatC a(n, n);
    a.real() = c_re * proj.transpose();
    a.imag() = c_im * proj.transpose();
    a.diagonal().array() += 0.5;
    return a;
}

// ---------------------------------------------------------------------------

cplx BoundarySolution::u_trace(std::size_t j) const
{
    return bc.kind == BcKind::dirichlet ? cplx{} : density[j];
}

cplx BoundarySolution::un_trace(std::size_t j) const
{
    switch (bc.kind)
    {
    case BcKind::dirichlet:
        return density[j];
    case BcKind::neumann:
        return {};
    case BcKind::impedance:
        return -bc.h * density[j];
    }
    return {};
}

BoundaryOperator::BoundaryOperator(std::shared_ptr<const QuadSurface> surface, const BoundaryCondition &bc,
                                   Wavenumber k, const SolverOptions &opts)
    : surface_(std::move(surface)), bc_(bc), k_(k.value()), opts_(opts)
{
    if (bc_.kind == BcKind::impedance && bc_.h.imag() < 0.0)
        throw DomainError("impedance requires Im h >= 0");
    if (surface_->spec.is_sphere())
    {
        const ResonanceAdvisory adv = interior_resonance_guard(surface_->spec, k, bc_, opts_);
        if (adv.warning)
            warnings_.push_back(adv.message);
    }
    a_ = assemble_matrix(*surface_, bc_, k, opts_);
    lu_.compute(a_);
    const double rc = lu_.rcond();
    cond_ = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (cond_ > opts_.condition_threshold)
    {
        std::ostringstream os;
        os << "condition estimate " << cond_ << " at k=" << k_ << " on '" << surface_->spec.label()
           << "' suggests a spurious interior resonance";
        warnings_.push_back(os.str());
    }
    for (const std::string &w : warnings_)
        warn(w);
}

VecC BoundaryOperator::rhs(const Incidence &inc) const
{
    const QuadSurface &q = *surface_;
    if (!inc.is_plane_wave())
    {
        const Vec3 &y0 = inc.source();
        if (q.spec.contains(y0))
            throw GeometryError("point source lies inside the obstacle");
        if (q.node_distance(y0) < q.panel_diameter)
            throw GeometryError("point source closer to the surface than one panel diameter");
    }
    VecC b(q.size());
    for (std::size_t j = 0; j < q.size(); ++j)
        b[j] = bc_.kind == BcKind::dirichlet ? inc.normal_derivative(q.nodes[j], q.normals[j], k_)
                                             : inc.field(q.nodes[j], k_);
    return b;
}

VecC BoundaryOperator::solve_rhs(const VecC &b, double *residual) const
{
    VecC x = lu_.solve(b);
    VecC r = b - a_ * x;
    x += lu_.solve(r);
    if (!x.allFinite())
        throw SolverError("boundary system is singular");
    r = b - a_ * x;
    const double bn = b.norm();
    const double res = bn > 0.0 ? r.norm() / bn : r.norm();
    if (residual)
        *residual = res;
    return x;
}

BoundarySolution BoundaryOperator::solve(const Incidence &inc) const
{
    BoundarySolution s;
    s.surface = surface_;
    s.bc = bc_;
    s.incidence = inc;
    s.k = k_;
    s.density = solve_rhs(rhs(inc), &s.residual);
    s.condition_estimate = cond_;
    s.warnings = warnings_;
    if (s.residual > opts_.tolerance)
    {
        std::ostringstream os;
        os << "linear residual " << s.residual << " above tolerance " << opts_.tolerance;
        s.warnings.push_back(os.str());
        warn(os.str());
    }
    return s;
}

BoundarySolution solve_scattering(const QuadSurface &surface, const BoundaryCondition &bc, const Incidence &inc,
                                  Wavenumber k, const SolverOptions &opts)
{
    return BoundaryOperator(surface, bc, k, opts).solve(inc);
}

// ---------------------------------------------------------------------------

namespace
{

/// j_l (derivative = false) or j_l' at x.
double bessel_family(int l, double x, bool derivative)
{
    const auto j = sph_bessel_j_array(l + 1, x);
    if (!derivative)
        return j[l];
    return l == 0 ? -j[1] : j[l - 1] - (l + 1) / x * j[l];
}

std::optional<double> zero_in_band(double x, double band, bool derivative)
{
    const double lo = x * (1.0 - band), hi = x * (1.0 + band);
    std::optional<double> best;
    // zeros of j_l and j_l' lie above l - 1
    for (int l = 0; l <= static_cast<int>(hi) + 2; ++l)
    {
        double a = lo, b = hi;
        double fa = bessel_family(l, a, derivative), fb = bessel_family(l, b, derivative);
        if (fa == 0.0)
            b = a;
        else if (fb == 0.0)
            a = b;
        else if ((fa < 0.0) == (fb < 0.0))
            continue;
        for (int it = 0; it < 200 && b - a > 1e-14 * x; ++it)
        {
            const double m = 0.5 * (a + b);
            const double fm = bessel_family(l, m, derivative);
            if ((fm < 0.0) == (fa < 0.0))
            {
                a = m;
                fa = fm;
            }
            else
                b = m;
        }
        const double z = 0.5 * (a + b);
        if (!best || std::abs(z - x) < std::abs(*best - x))
            best = z;
    }
    return best;
}

} // namespace

ResonanceAdvisory interior_resonance_guard(const SurfaceSpec &spec, Wavenumber kw, std::optional<BoundaryCondition> bc,
                                           const SolverOptions &opts, int monitor_theta, int monitor_phi)
{
    const double k = kw.value();
    ResonanceAdvisory adv;
    std::ostringstream os;
    if (spec.is_sphere())
    {
        const double x = k * spec.mean_radius();
        std::optional<double> z;
        auto take = [&](std::optional<double> c) {
            if (c && (!z || std::abs(*c - x) < std::abs(*z - x)))
                z = c;
        };
        if (!bc || bc->kind == BcKind::dirichlet)
            take(zero_in_band(x, opts.resonance_band, true));
        if (!bc || bc->kind != BcKind::dirichlet)
            take(zero_in_band(x, opts.resonance_band, false));
        if (z)
        {
            adv.warning = true;
            adv.nearest_zero = z;
            os << "ka=" << x << " lies within " << 100.0 * opts.resonance_band
               << "% of the interior resonance at ka=" << *z;
            adv.message = os.str();
        }
        return adv;
    }

    const QuadSurface q = discretize(spec, monitor_theta, monitor_phi);
    std::vector<BoundaryCondition> bcs;
    if (bc)
        bcs.push_back(*bc);
    else
        bcs = {BoundaryCondition::dirichlet(), BoundaryCondition::neumann()};
    double cond = 0.0;
    for (const BoundaryCondition &b : bcs)
    {
        const MatC a = assemble_matrix(q, b, kw, opts);
        const double rc = Eigen::PartialPivLU<MatC>(a).rcond();
        cond = std::max(cond, rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity());
    }
    adv.condition_estimate = cond;
    if (cond > opts.condition_threshold)
    {
        adv.warning = true;
        os << "monitor condition estimate " << cond << " at k=" << k << " exceeds " << opts.condition_threshold;
        adv.message = os.str();
    }
    return adv;
}

} // namespace helmscat
