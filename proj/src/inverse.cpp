// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include "helmscat/inverse.hpp"

#include <array>
#include <limits>
#include <random>

namespace helmscat
{

namespace
{

std::vector<double> data_weights(const FarFieldPattern &p)
{
    return p.has_grid() ? p.weights : std::vector<double>(p.size(), 4.0 * pi / static_cast<double>(p.size()));
}

/// Stacked real/imaginary weighted residual, scaled by the data norm.
Eigen::VectorXd residual_vector(const FarFieldPattern &model, const FarFieldPattern &data,
                                const std::vector<double> &w, double data_norm)
{
    const std::size_t n = data.size();
    Eigen::VectorXd r(2 * n);
    for (std::size_t j = 0; j < n; ++j)
    {
        const cplx d = std::sqrt(w[j]) * (model.values[j] - data.values[j]) / data_norm;
        r[2 * j] = d.real();
        r[2 * j + 1] = d.imag();
    }
    return r;
}

double weighted_norm(const FarFieldPattern &p, const std::vector<double> &w)
{
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        s += w[j] * std::norm(p.values[j]);
    return std::sqrt(s);
}

std::vector<double> padded_coeffs(const SurfaceSpec &s, int degree)
{
    std::vector<double> c = s.coeffs();
    if (s.degree() < degree)
        c.resize(sh_count(degree), 0.0);
    return c;
}

SurfaceSpec with_unknowns(const SurfaceSpec &base, const Eigen::VectorXd &x)
{
    std::vector<double> c = base.coeffs();
    for (Eigen::Index i = 0; i < x.size(); ++i)
        c[i] = x[i];
    return base.with_coeffs(std::move(c));
}

FarFieldPattern model_pattern(const SurfaceSpec &s, const InversionConfig &cfg, const FarFieldPattern &data)
{
    return forward_pattern(s, cfg.bc, Wavenumber(cfg.k0), cfg.alpha0, data.directions, cfg.n_theta, cfg.n_phi,
                           cfg.solver);
}

bool same_surface(const SurfaceSpec &a, const SurfaceSpec &b)
{
    return a.coeffs() == b.coeffs() && a.center() == b.center();
}

} // namespace

FarFieldPattern forward_pattern(const SurfaceSpec &spec, const BoundaryCondition &bc, Wavenumber k,
                                const Vec3 &alpha, std::span<const Vec3> directions, int n_theta, int n_phi,
                                const SolverOptions &opts)
{
    const BoundarySolution sol =
        solve_scattering(discretize(spec, n_theta, n_phi), bc, Incidence::plane_wave(alpha), k, opts);
    return far_field(sol, directions);
}

FarFieldPattern add_multiplicative_noise(const FarFieldPattern &p, double level, std::uint64_t seed)
{
    if (level < 0.0)
        throw DomainError("add_multiplicative_noise: negative level");
    FarFieldPattern out = p;
    if (level == 0.0)
        return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    for (cplx &v : out.values)
    {
        const double re = g(rng);
        const double im = g(rng);
        v *= 1.0 + level * cplx(re, im);
    }
    return out;
}

double data_misfit(const FarFieldPattern &model, const FarFieldPattern &data)
{
    if (model.size() != data.size())
        throw DomainError("data_misfit: pattern sizes differ");
    const std::vector<double> w = data_weights(data);
    return relative_l2(model.values, data.values, w);
}

bool is_cap_data(const FarFieldPattern &data)
{
    if (!data.has_grid())
        return false;
    double s = 0.0;
    for (double w : data.weights)
        s += w;
    return s < 4.0 * pi * (1.0 - 1e-8);
}

FarFieldPattern extend_to_sphere(const FarFieldPattern &cap, int degree, const SphereGrid &grid, double *condition)
{
    const FitResult fit = fit_expansion(cap.directions, cap.values, degree, cap.weights);
    if (condition)
        *condition = fit.condition_number;
    FarFieldPattern out;
    out.k = cap.k;
    out.alpha = cap.alpha;
    out.n_theta = grid.n_theta;
    out.n_phi = grid.n_phi;
    out.directions = grid.directions;
    out.weights = grid.weights;
    for (const Vec3 &d : grid.directions)
        out.values.push_back(fit.expansion(d));
    return out;
}

MatC pattern_jacobian(const SurfaceSpec &spec, const InversionConfig &cfg, double step)
{
    const int n = sh_count(cfg.degree);
    const SurfaceSpec base = spec.with_coeffs(padded_coeffs(spec, cfg.degree));
    MatC jac(cfg.data.size(), n);
    std::vector<std::string> failures(n);

#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
    for (int c = 0; c < n; ++c)
    {
        try
        {
            std::vector<double> plus = base.coeffs(), minus = base.coeffs();
            plus[c] += step;
            minus[c] -= step;
            const FarFieldPattern fp = model_pattern(base.with_coeffs(plus), cfg, cfg.data);
            const FarFieldPattern fm = model_pattern(base.with_coeffs(minus), cfg, cfg.data);
            for (std::size_t j = 0; j < cfg.data.size(); ++j)
                jac(j, c) = (fp.values[j] - fm.values[j]) / (2.0 * step);
        }
        catch (const Error &e)
        {
            failures[c] = e.what();
        }
    }
    for (const std::string &f : failures)
        if (!f.empty())
            throw GeometryError("pattern_jacobian: perturbed surface rejected: " + f);
    return jac;
}

InversionResult reconstruct_shape(const InversionConfig &cfg_in, const SurfaceSpec &initial)
{
    if (cfg_in.data.size() == 0)
        throw DomainError("reconstruct_shape: empty data");
    if (cfg_in.degree > initial.degree())
        throw DomainError("reconstruct_shape: inversion degree exceeds the geometry degree");
    if (cfg_in.lambda < 0.0)
        throw DomainError("reconstruct_shape: negative regularization weight");

    InversionConfig cfg = cfg_in;
    InversionResult res{initial, cfg.bc, {}, 0.0, 0, false, {}, cfg.lambda, std::nullopt, std::nullopt};
    if (is_cap_data(cfg.data))
    {
        double cond = 0.0;
        cfg.data = extend_to_sphere(cfg.data, cfg.continuation_degree, sphere_grid(12, 24), &cond);
        res.continuation_condition = cond;
    }

    const std::vector<double> w = data_weights(cfg.data);
    const double dnorm = weighted_norm(cfg.data, w);
    const int n = sh_count(cfg.degree);
    const Eigen::VectorXd c_init = Eigen::Map<const Eigen::VectorXd>(initial.coeffs().data(), n);
    Eigen::VectorXd c = c_init;
    SurfaceSpec cur = initial;

    auto objective = [&](const Eigen::VectorXd &r, const Eigen::VectorXd &x) {
        return r.squaredNorm() + cfg.lambda * (x - c_init).squaredNorm();
    };

    Eigen::VectorXd r = residual_vector(model_pattern(cur, cfg, cfg.data), cfg.data, w, dnorm);
    double obj = objective(r, c);
    double mu = cfg.initial_damping;
    res.misfit_trace.push_back(std::sqrt(obj));

    res.stop_reason = "max_iterations";
    for (int it = 0; it < cfg.max_iterations; ++it)
    {
        res.iterations = it + 1;
        if (r.norm() < cfg.misfit_tolerance)
        {
            res.converged = true;
            res.stop_reason = "misfit";
            break;
        }
        const MatC jc = pattern_jacobian(cur, cfg, cfg.fd_step);
        Eigen::MatrixXd jac(2 * jc.rows(), n);
        for (Eigen::Index j = 0; j < jc.rows(); ++j)
        {
            const double sw = std::sqrt(w[j]) / dnorm;
            for (int a = 0; a < n; ++a)
            {
                jac(2 * j, a) = sw * jc(j, a).real();
                jac(2 * j + 1, a) = sw * jc(j, a).imag();
            }
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r + cfg.lambda * (c - c_init);

        bool accepted = false;
        Eigen::VectorXd step;
        while (mu < 1e12)
        {
            Eigen::MatrixXd m = jtj;
            m.diagonal().array() += cfg.lambda + mu * jtj.diagonal().array().max(1e-12);
            step = m.ldlt().solve(-grad);
            const Eigen::VectorXd trial = c + step;
            try
            {
                const SurfaceSpec s = with_unknowns(cur, trial);
                const Eigen::VectorXd rt = residual_vector(model_pattern(s, cfg, cfg.data), cfg.data, w, dnorm);
                const double ot = objective(rt, trial);
                if (ot < obj)
                {
                    c = trial;
                    cur = s;
                    r = rt;
                    obj = ot;
                    mu = std::max(mu / 3.0, 1e-12);
                    accepted = true;
                    break;
                }
            }
            catch (const GeometryError &)
            {
                // star-shapedness lost: damp harder
            }
            mu *= 10.0;
        }
        if (!accepted)
        {
            res.stop_reason = "damping_limit";
            break;
        }
        res.misfit_trace.push_back(std::sqrt(obj));
        if (step.norm() < cfg.step_tolerance)
        {
            res.converged = true;
            res.stop_reason = "step";
            break;
        }
    }
    if (!res.converged && r.norm() < cfg.misfit_tolerance)
    {
        res.converged = true;
        res.stop_reason = "misfit";
    }
    res.surface = cur;
    res.misfit = r.norm();
    return res;
}

// ---------------------------------------------------------------------------

namespace
{

/// Minimizes f over the plane with the standard Nelder-Mead moves.
std::array<double, 2> nelder_mead(const std::function<double(double, double)> &f, std::array<double, 2> start,
                                  double size, int max_evals, double ftol)
{
    using P = std::array<double, 2>;
    std::array<P, 3> s{start, P{start[0] + size, start[1]}, P{start[0], start[1] + size}};
    std::array<double, 3> v{};
    int evals = 0;
    for (int i = 0; i < 3; ++i)
    {
        v[i] = f(s[i][0], s[i][1]);
        ++evals;
    }
    auto lerp = [](const P &a, const P &b, double t) { return P{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])}; };
    while (evals < max_evals)
    {
        std::array<int, 3> o{0, 1, 2};
        std::sort(o.begin(), o.end(), [&](int a, int b) { return v[a] < v[b]; });
        const int best = o[0], mid = o[1], worst = o[2];
        if (std::abs(v[worst] - v[best]) <= ftol * (std::abs(v[best]) + 1e-300) &&
            std::hypot(s[worst][0] - s[best][0], s[worst][1] - s[best][1]) < 1e-10)
            break;
        const P cen{0.5 * (s[best][0] + s[mid][0]), 0.5 * (s[best][1] + s[mid][1])};
        const P xr = lerp(cen, s[worst], -1.0);
        const double fr = f(xr[0], xr[1]);
        ++evals;
        if (fr < v[best])
        {
            const P xe = lerp(cen, s[worst], -2.0);
            const double fe = f(xe[0], xe[1]);
            ++evals;
            if (fe < fr)
                s[worst] = xe, v[worst] = fe;
            else
                s[worst] = xr, v[worst] = fr;
            continue;
        }
        if (fr < v[mid])
        {
            s[worst] = xr, v[worst] = fr;
            continue;
        }
        const P xc = fr < v[worst] ? lerp(cen, xr, 0.5) : lerp(cen, s[worst], 0.5);
        const double fc = f(xc[0], xc[1]);
        ++evals;
        if (fc < std::min(fr, v[worst]))
        {
            s[worst] = xc, v[worst] = fc;
            continue;
        }
        for (int i : {mid, worst})
        {
            s[i] = lerp(s[best], s[i], 0.5);
            v[i] = f(s[i][0], s[i][1]);
            ++evals;
        }
    }
    const int b = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
    return s[b];
}

} // namespace

BcClassification classify_boundary_condition(const SurfaceSpec &surface, const FarFieldPattern &data, Wavenumber k0,
                                             const Vec3 &alpha0, int n_theta, int n_phi, double h_max,
                                             const SolverOptions &opts)
{
    if (data.size() == 0)
        throw DomainError("classify_boundary_condition: empty data");
    const auto q = std::make_shared<const QuadSurface>(discretize(surface, n_theta, n_phi));
    const Incidence inc = Incidence::plane_wave(alpha0);
    const std::vector<double> w = data_weights(data);

    auto misfit_of = [&](const BoundarySolution &sol) {
        return relative_l2(far_field(sol, data.directions).values, data.values, w);
    };

    BcClassification out;
    for (const BoundaryCondition &bc : {BoundaryCondition::dirichlet(), BoundaryCondition::neumann()})
    {
        const BoundaryOperator op(q, bc, k0, opts);
        out.misfits[to_string(bc.kind)] = misfit_of(op.solve(inc));
    }

    // the impedance operator is affine in h: A(h) = A0 + h (A1 - A0)
    const MatC a0 = assemble_matrix(*q, BoundaryCondition::impedance(0.0), k0, opts);
    const MatC da = assemble_matrix(*q, BoundaryCondition::impedance(1.0), k0, opts) - a0;
    VecC b(q->size());
    for (std::size_t j = 0; j < q->size(); ++j)
        b[j] = inc.field(q->nodes[j], k0);

    auto impedance_misfit = [&](double hr, double hi) {
        if (hi < 0.0 || std::hypot(hr, hi) > h_max)
            return std::numeric_limits<double>::max();
        const cplx h(hr, hi);
        BoundarySolution sol;
        sol.surface = q;
        sol.bc = BoundaryCondition::impedance(h);
        sol.incidence = inc;
        sol.k = k0.value();
        sol.density = Eigen::PartialPivLU<MatC>(a0 + h * da).solve(b);
        return misfit_of(sol);
    };
    std::array<double, 2> best_h{0.0, 0.0};
    double best_m = std::numeric_limits<double>::max();
    for (const std::array<double, 2> start : {std::array<double, 2>{0.5, 0.5}, std::array<double, 2>{-0.5, 0.5},
                                              std::array<double, 2>{3.0, 1.0}})
    {
        const auto h = nelder_mead(impedance_misfit, start, 0.4, 400, 1e-12);
        const double m = impedance_misfit(h[0], h[1]);
        if (m < best_m)
            best_m = m, best_h = h;
    }
    out.fitted_h = cplx(best_h[0], best_h[1]);
    out.misfits["impedance"] = best_m;

    std::vector<std::pair<double, std::string>> ranked;
    for (const auto &[name, m] : out.misfits)
        ranked.emplace_back(m, name);
    std::sort(ranked.begin(), ranked.end());
    out.noise_floor = ranked[0].first;
    out.gap = ranked[1].first - ranked[0].first;
    out.ambiguous = out.gap < 10.0 * out.noise_floor;

    std::string pick = ranked[0].second;
    if (out.ambiguous && ((ranked[0].second == "impedance" && ranked[1].second == "neumann") ||
                          (ranked[0].second == "neumann" && ranked[1].second == "impedance")))
        pick = "neumann";
    if (pick == "dirichlet")
        out.selected = BoundaryCondition::dirichlet();
    else if (pick == "neumann")
        out.selected = BoundaryCondition::neumann();
    else
        out.selected = BoundaryCondition::impedance(*out.fitted_h);
    return out;
}

// ---------------------------------------------------------------------------

namespace
{

FarFieldPattern pattern_on(const SurfaceSpec &s, const BoundaryCondition &bc, Wavenumber k, const Vec3 &alpha,
                           const SphereGrid &grid, int nt, int np, const SolverOptions &opts)
{
    const BoundarySolution sol =
        solve_scattering(discretize(s, nt, np), bc, Incidence::plane_wave(alpha), k, opts);
    return far_field(sol, grid);
}

DiscrepancyReport compare_patterns(const SurfaceSpec &s1, const SurfaceSpec &s2, Wavenumber k, const Vec3 &alpha,
                                   const BoundaryCondition &bc, int nt, int np, const SolverOptions &opts)
{
    const SphereGrid grid = sphere_grid(16, 32);
    const FarFieldPattern a1 = pattern_on(s1, bc, k, alpha, grid, nt, np, opts);
    const FarFieldPattern a2 = same_surface(s1, s2) ? a1 : pattern_on(s2, bc, k, alpha, grid, nt, np, opts);
    const FarFieldPattern a1_fine = pattern_on(s1, bc, k, alpha, grid, nt + 4, np + 8, opts);

    DiscrepancyReport r;
    auto symmetric = [&](std::span<const cplx> x, std::span<const cplx> y) {
        return std::max(relative_l2(x, y, grid.weights), relative_l2(y, x, grid.weights));
    };
    r.complex_distance = symmetric(a1.values, a2.values);
    std::vector<cplx> m1, m2;
    for (std::size_t j = 0; j < a1.size(); ++j)
    {
        m1.emplace_back(std::abs(a1.values[j]));
        m2.emplace_back(std::abs(a2.values[j]));
    }
    r.modulus_distance = symmetric(m1, m2);
    r.noise_floor = relative_l2(a1.values, a1_fine.values, grid.weights);
    r.distinct = r.complex_distance > 10.0 * r.noise_floor;
    return r;
}

} // namespace

DiscrepancyReport discriminate_disjoint(const SurfaceSpec &spec1, const SurfaceSpec &spec2, Wavenumber k0,
                                        const Vec3 &alpha0, const BoundaryCondition &bc, int n_theta, int n_phi,
                                        const SolverOptions &opts)
{
    if (!same_surface(spec1, spec2))
    {
        const QuadSurface q1 = discretize(spec1, n_theta, n_phi);
        const QuadSurface q2 = discretize(spec2, n_theta, n_phi);
        for (const Vec3 &x : q1.nodes)
            if (spec2.radial_gap(x) <= 0.0)
                throw GeometryError("discriminate_disjoint: obstacles overlap");
        for (const Vec3 &x : q2.nodes)
            if (spec1.radial_gap(x) <= 0.0)
                throw GeometryError("discriminate_disjoint: obstacles overlap");
    }
    DiscrepancyReport r = compare_patterns(spec1, spec2, k0, alpha0, bc, n_theta, n_phi, opts);
    r.arrangement = same_surface(spec1, spec2) ? "identical" : "disjoint";
    return r;
}

DiscrepancyReport discriminate_nested(const SurfaceSpec &inner, const SurfaceSpec &outer, Wavenumber k0,
                                      const Vec3 &alpha0, const BoundaryCondition &bc, int n_theta, int n_phi,
                                      const SolverOptions &opts)
{
    const QuadSurface qi = discretize(inner, n_theta, n_phi);
    const QuadSurface qo = discretize(outer, n_theta, n_phi);
    for (const Vec3 &x : qi.nodes)
        if (outer.radial_gap(x) >= -1e-9 * outer.max_radius())
            throw GeometryError("discriminate_nested: inner obstacle is not strictly inside the outer one");

    DiscrepancyReport r = compare_patterns(inner, outer, k0, alpha0, bc, n_theta, n_phi, opts);
    r.arrangement = "nested";

    const BoundarySolution u1 = solve_scattering(qi, bc, Incidence::plane_wave(alpha0), k0, opts);
    const std::vector<cplx> u = eval_total(u1, qo.nodes, PointCheck::unchecked);
    double m = std::numeric_limits<double>::max();
    for (const cplx &v : u)
        m = std::min(m, std::abs(v));
    r.min_abs_u = m;
    return r;
}

} // namespace helmscat
