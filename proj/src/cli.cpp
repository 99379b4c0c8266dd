// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include "helmscat/cli.hpp"

#include <chrono>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "helmscat/oracle.hpp"

namespace helmscat::cli
{

namespace
{

namespace fs = std::filesystem;

class UsageError : public Error
{
public:
    using Error::Error;
};

/// Options shared by the scenario-driven subcommands; flags override the
/// --config file.
struct ScenarioFlags
{
    std::string config;
    std::string surface_file;
    std::string shape;
    double radius = 0.0, a = 0.0, c = 0.0;
    std::vector<double> center;
    std::string bc;
    double h_re = 0.0, h_im = 0.0;
    std::vector<double> alpha;
    std::vector<double> source;
    double k = 0.0;
    std::vector<int> grid;
    std::vector<int> far;
    std::optional<double> noise;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App *app)
    {
        app->add_option("--config", config, "scenario JSON file");
        app->add_option("--surface", surface_file, "surface JSON file");
        app->add_option("--shape", shape, "sphere | spheroid")->check(CLI::IsMember({"sphere", "spheroid"}));
        app->add_option("--radius", radius, "sphere radius");
        app->add_option("--a", a, "spheroid equatorial semi-axis");
        app->add_option("--c", c, "spheroid polar semi-axis");
        app->add_option("--center", center, "obstacle center")->expected(3);
        app->add_option("--bc", bc, "dirichlet | neumann | impedance");
        app->add_option("--h-re", h_re, "impedance, real part");
        app->add_option("--h-im", h_im, "impedance, imaginary part (>= 0)");
        app->add_option("--alpha", alpha, "plane-wave direction")->expected(3);
        app->add_option("--source", source, "point-source position")->expected(3);
        app->add_option("--k", k, "wavenumber");
        app->add_option("--grid", grid, "surface grid n_theta n_phi")->expected(2);
        app->add_option("--far", far, "far-field grid n_theta n_phi")->expected(2);
        app->add_option("--noise", noise, "multiplicative complex noise level on the pattern");
        app->add_option("--seed", seed, "noise seed");
    }

    ScenarioConfig resolve() const
    {
        ScenarioConfig s = config.empty() ? ScenarioConfig{} : scenario_from_json(read_json(config));
        const Vec3 ctr = center.empty() ? Vec3::Zero() : Vec3(center[0], center[1], center[2]);
        if (!surface_file.empty())
            s.surface = surface_from_json(read_json(surface_file));
        if (shape == "sphere")
            s.surface = make_sphere(radius > 0.0 ? radius : 1.0, ctr);
        else if (shape == "spheroid")
        {
            if (!(a > 0.0 && c > 0.0))
                throw UsageError("--shape spheroid needs --a and --c");
            s.surface = make_spheroid(a, c, ctr);
        }
        else if (!center.empty())
            s.surface = s.surface.translated(ctr - s.surface.center());
        if (!bc.empty())
        {
            const BcKind kind = parse_bc_kind(bc);
            s.bc = kind == BcKind::impedance ? BoundaryCondition::impedance({h_re, h_im})
                   : kind == BcKind::neumann ? BoundaryCondition::neumann()
                                             : BoundaryCondition::dirichlet();
        }
        if (!alpha.empty() && !source.empty())
            throw UsageError("--alpha and --source are mutually exclusive");
        if (!alpha.empty())
            s.incidence = Incidence::plane_wave(Vec3(alpha[0], alpha[1], alpha[2]));
        if (!source.empty())
            s.incidence = Incidence::point_source(Vec3(source[0], source[1], source[2]));
        if (k != 0.0)
            s.k = k;
        if (!grid.empty())
            s.n_theta = grid[0], s.n_phi = grid[1];
        if (!far.empty())
            s.far_theta = far[0], s.far_phi = far[1];
        if (noise)
            s.noise = *noise;
        if (seed)
            s.seed = *seed;
        if (s.noise < 0.0)
            throw UsageError("--noise must be non-negative");
        if (!(s.k > 0.0))
            throw UsageError("wavenumber must be positive");
        return s;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Context
{
    std::ostream &out;
    std::ostream &err;
    RunManifest &manifest;
    fs::path out_dir;
    bool dry_run = false;

    void emit(const std::string &name, const std::string &text)
    {
        const fs::path p = out_dir / name;
        write_text(p, text);
        manifest.outputs.push_back(p.string());
    }

    /// Prints the plan; true if the caller should stop.
    bool plan(const json &details)
    {
        if (!dry_run)
            return false;
        json j = to_json(manifest);
        j["plan"] = details;
        j["dry_run"] = true;
        out << j.dump(2) << "\n";
        return true;
    }
};

json solve_plan(const ScenarioConfig &s)
{
    const double n = static_cast<double>(s.n_theta) * s.n_phi;
    return {{"nodes", n}, {"matrix_bytes", n * n * 16.0}, {"lu_flops", 8.0 / 3.0 * n * n * n}};
}

// ---------------------------------------------------------------------------

int cmd_forward(Context &ctx, const ScenarioFlags &flags)
{
    const ScenarioConfig s = flags.resolve();
    ctx.manifest.config = to_json(s);
    if (ctx.plan(solve_plan(s)))
        return exit_ok;

    const auto t0 = std::chrono::steady_clock::now();
    const ResonanceAdvisory adv = interior_resonance_guard(s.surface, Wavenumber(s.k), s.bc, s.solver);
    if (adv.warning)
        ctx.manifest.warnings.push_back(adv.message);
    const BoundarySolution sol =
        solve_scattering(discretize(s.surface, s.n_theta, s.n_phi), s.bc, s.incidence, Wavenumber(s.k), s.solver);
    ctx.manifest.timings["solve"] = seconds_since(t0);
    for (const std::string &w : sol.warnings)
        ctx.manifest.warnings.push_back(w);

    ctx.emit("density.csv", density_csv(sol));
    std::ostringstream summary;
    summary << "surface " << s.surface.label() << ", " << s.bc.describe() << ", " << s.incidence.describe()
            << ", k=" << s.k << ", grid (" << s.n_theta << "," << s.n_phi << ")\n"
            << "  linear residual " << sol.residual << ", condition estimate " << sol.condition_estimate << "\n";
    json meta{{"surface", s.surface.label()}, {"bc", to_json(s.bc)}, {"grid", {s.n_theta, s.n_phi}}};
    if (s.incidence.is_plane_wave())
    {
        const FarFieldPattern p =
            add_multiplicative_noise(far_field(sol, sphere_grid(s.far_theta, s.far_phi)), s.noise, s.seed);
        ctx.emit("pattern.csv", pattern_csv(p, meta));
        summary << "  far field: |A| max " << std::abs(*std::max_element(p.values.begin(), p.values.end(),
                                                                            [](cplx x, cplx y) {
                                                                                return std::abs(x) < std::abs(y);
                                                                            }))
                << ", int |A|^2 = " << p.norm_squared() << "\n";
    }
    ctx.out << summary.str();
    return exit_ok;
}

int cmd_greens(Context &ctx, const ScenarioFlags &flags, const std::vector<double> &xs, const std::vector<double> &ys)
{
    const ScenarioConfig s = flags.resolve();
    if (xs.size() % 3 != 0 || xs.empty() || xs.size() != ys.size())
        throw UsageError("greens: --x and --y take matching lists of 3-points");
    ctx.manifest.config = to_json(s);
    ctx.manifest.config["x"] = xs;
    ctx.manifest.config["y"] = ys;
    if (ctx.plan(solve_plan(s)))
        return exit_ok;

    const auto t0 = std::chrono::steady_clock::now();
    const GreensFunction green(s.surface, s.bc, Wavenumber(s.k), s.n_theta, s.n_phi, s.solver);
    json samples = json::array();
    for (std::size_t i = 0; i < xs.size(); i += 3)
    {
        const Vec3 x(xs[i], xs[i + 1], xs[i + 2]), y(ys[i], ys[i + 1], ys[i + 2]);
        const GreensSample g = green(x, y);
        samples.push_back({{"x", {x.x(), x.y(), x.z()}}, {"y", {y.x(), y.y(), y.z()}},
                           {"re", g.value.real()}, {"im", g.value.imag()}});
        ctx.out << "G(" << x.transpose() << "; " << y.transpose() << ") = " << format_double(g.value.real())
                << " + " << format_double(g.value.imag()) << "i\n";
    }
    ctx.manifest.timings["solve"] = seconds_since(t0);
    ctx.emit("greens.json", samples.dump(2) + "\n");
    return exit_ok;
}

int cmd_oracle(Context &ctx, double radius, const std::string &bc_name, double h_re, double h_im, double k,
               const std::vector<double> &alpha, const std::vector<int> &far)
{
    const BcKind kind = parse_bc_kind(bc_name);
    const BoundaryCondition bc = kind == BcKind::impedance ? BoundaryCondition::impedance({h_re, h_im})
                                 : kind == BcKind::neumann ? BoundaryCondition::neumann()
                                                           : BoundaryCondition::dirichlet();
    const Vec3 a = alpha.empty() ? Vec3(0.0, 0.0, 1.0) : Vec3(alpha[0], alpha[1], alpha[2]);
    const int nt = far.empty() ? 16 : far[0], np = far.empty() ? 32 : far[1];
    ctx.manifest.config = {{"radius", radius}, {"bc", to_json(bc)}, {"k", k},
                           {"alpha", {a.x(), a.y(), a.z()}}, {"far_field", {nt, np}}};
    const PartialWaveCoeffs c = partial_wave_coeffs(radius, bc, Wavenumber(k));
    if (ctx.plan({{"l_max", c.l_max}, {"directions", nt * np}}))
        return exit_ok;
    const FarFieldPattern p = mie_far_field(radius, bc, Wavenumber(k), Incidence::plane_wave(a).direction(),
                                            sphere_grid(nt, np));
    ctx.emit("pattern.csv", pattern_csv(p, {{"source", "partial-wave series"}, {"radius", radius},
                                             {"bc", to_json(bc)}, {"l_max", c.l_max}}));
    ctx.out << "partial-wave series, l_max " << c.l_max << ", " << p.size() << " directions, int |A|^2 = "
            << format_double(p.norm_squared()) << "\n";
    return exit_ok;
}

int cmd_verify(Context &ctx, const std::string &suite, const std::string &identity, const std::string &config)
{
    SuiteProfile profile;
    if (!config.empty())
        profile = profile_from_json(read_json(config));
    else if (suite == "fast")
        profile = fast_profile();
    else if (suite == "slow")
        profile = slow_profile();
    else
        throw UsageError("verify: --suite must be fast or slow");

    ctx.manifest.config = to_json(profile);
    ctx.manifest.profiles[profile.name] = profile.version;
    std::vector<std::string> planned;
    for (const std::string &n : suite_identities())
        if (n.compare(0, identity.size(), identity) == 0)
            planned.push_back(n);
    if (planned.empty())
        throw UsageError("verify: no identity matches '" + identity + "'");
    if (ctx.plan({{"identities", planned}}))
        return exit_ok;

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<IdentityReport> reports = run_suite(profile, identity);
    ctx.manifest.timings["suite"] = seconds_since(t0);
    ctx.emit("report.json", to_json(reports).dump(2) + "\n");
    ctx.out << format_reports(reports);
    const bool ok = std::all_of(reports.begin(), reports.end(), [](const IdentityReport &r) { return r.pass; });
    return ok ? exit_ok : exit_check_failed;
}

struct InvertFlags
{
    std::string data;
    double k = 0.0;
    std::vector<double> alpha;
    int degree = 2;
    std::string bc = "auto";
    double lambda = 1e-6;
    int max_iter = 30;
    std::vector<int> grid{12, 24};
    double radius0 = 1.0;
    double h_re = 0.0, h_im = 0.0;
};

int cmd_invert(Context &ctx, const InvertFlags &f)
{
    if (f.data.empty())
        throw UsageError("invert: --data is required");
    FarFieldPattern data = read_pattern_csv(fs::path(f.data));
    const double k = f.k > 0.0 ? f.k : data.k;
    if (!(k > 0.0))
        throw UsageError("invert: wavenumber missing (--k or pattern metadata)");
    Vec3 alpha = data.alpha.value_or(Vec3(0.0, 0.0, 1.0));
    if (!f.alpha.empty())
        alpha = Vec3(f.alpha[0], f.alpha[1], f.alpha[2]);

    InversionConfig cfg;
    cfg.k0 = k;
    cfg.alpha0 = Incidence::plane_wave(alpha).direction();
    cfg.data = data;
    cfg.degree = f.degree;
    cfg.lambda = f.lambda;
    cfg.max_iterations = f.max_iter;
    cfg.n_theta = f.grid[0];
    cfg.n_phi = f.grid[1];
    if (f.bc != "auto")
    {
        const BcKind kind = parse_bc_kind(f.bc);
        cfg.bc = kind == BcKind::impedance ? BoundaryCondition::impedance({f.h_re, f.h_im})
                 : kind == BcKind::neumann ? BoundaryCondition::neumann()
                                           : BoundaryCondition::dirichlet();
    }
    ctx.manifest.config = {{"data", f.data},       {"k", k},
                           {"alpha", {cfg.alpha0.x(), cfg.alpha0.y(), cfg.alpha0.z()}},
                           {"degree", f.degree},   {"bc", f.bc},
                           {"lambda", f.lambda},   {"max_iter", f.max_iter},
                           {"grid", f.grid},       {"initial_radius", f.radius0}};
    if (ctx.plan({{"unknowns", sh_count(f.degree)},
                  {"forward_solves_per_iteration", 2 * sh_count(f.degree) + 1},
                  {"data_points", data.size()}}))
        return exit_ok;

    const auto t0 = std::chrono::steady_clock::now();
    const SurfaceSpec initial = make_sphere(f.radius0, Vec3::Zero(), std::max(f.degree, default_geometry_degree));
    InversionResult res = reconstruct_shape(cfg, initial);
    if (f.bc == "auto")
    {
        FarFieldPattern full = data;
        if (is_cap_data(full))
            full = extend_to_sphere(full, cfg.continuation_degree, sphere_grid(12, 24));
        res.classification = classify_boundary_condition(res.surface, full, Wavenumber(k), cfg.alpha0, cfg.n_theta,
                                                         cfg.n_phi);
        res.bc = res.classification->selected;
        // the shape was fitted under Dirichlet; refit if another hypothesis wins
        if (res.bc.kind != BcKind::dirichlet)
        {
            cfg.bc = res.bc;
            auto cls = res.classification;
            res = reconstruct_shape(cfg, initial);
            res.classification = cls;
        }
    }
    ctx.manifest.timings["invert"] = seconds_since(t0);
    ctx.emit("result.json", to_json(res).dump(2) + "\n");
    ctx.emit("surface.json", to_json(res.surface).dump(2) + "\n");
    ctx.out << "iterations " << res.iterations << ", stop " << res.stop_reason << ", misfit " << res.misfit
            << ", bc " << res.bc.describe() << "\n";
    if (res.classification && res.classification->ambiguous)
        ctx.out << "boundary-condition classification is ambiguous (gap " << res.classification->gap << ")\n";
    return res.converged ? exit_ok : exit_check_failed;
}

struct SweepFlags
{
    std::string config;
    std::vector<double> ks;
    std::vector<std::string> grids;
    std::vector<std::string> shapes;
    std::string bc = "dirichlet";
    double budget = 1e13;
};

std::pair<int, int> parse_grid(const std::string &g)
{
    const auto x = g.find('x');
    if (x == std::string::npos)
        throw UsageError("grid '" + g + "' is not of the form NTxNP");
    try
    {
        return {std::stoi(g.substr(0, x)), std::stoi(g.substr(x + 1))};
    }
    catch (const std::exception &)
    {
        throw UsageError("grid '" + g + "' is not of the form NTxNP");
    }
}

int cmd_sweep(Context &ctx, SweepFlags f)
{
    std::vector<SurfaceSpec> shapes;
    BoundaryCondition bc = BoundaryCondition::dirichlet();
    Vec3 alpha(0.0, 0.0, 1.0);
    if (!f.config.empty())
    {
        const json j = read_json(f.config);
        try
        {
            if (j.contains("k"))
                f.ks = j["k"].get<std::vector<double>>();
            if (j.contains("grids"))
                for (const auto &g : j["grids"])
                    f.grids.push_back(std::to_string(g.at(0).get<int>()) + "x" + std::to_string(g.at(1).get<int>()));
            if (j.contains("shapes"))
                for (const auto &s : j["shapes"])
                    shapes.push_back(surface_from_json(s));
            if (j.contains("bc"))
                bc = bc_from_json(j["bc"]);
            if (j.contains("alpha"))
                alpha = Vec3(j["alpha"][0].get<double>(), j["alpha"][1].get<double>(), j["alpha"][2].get<double>());
            f.budget = j.value("budget", f.budget);
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("sweep config: ") + e.what());
        }
    }
    else if (f.bc != "dirichlet")
    {
        const BcKind kind = parse_bc_kind(f.bc);
        if (kind == BcKind::impedance)
            throw UsageError("sweep: impedance sweeps need a config file with h");
        bc = kind == BcKind::neumann ? BoundaryCondition::neumann() : BoundaryCondition::dirichlet();
    }
    for (const std::string &s : f.shapes)
    {
        if (s == "sphere")
            shapes.push_back(make_sphere(1.0));
        else if (s == "spheroid")
            shapes.push_back(make_spheroid(1.0, 1.5));
        else
            throw UsageError("sweep: unknown shape '" + s + "'");
    }
    if (shapes.empty() && !f.ks.empty() && !f.grids.empty())
        shapes.push_back(make_sphere(1.0));
    if (f.ks.empty() || f.grids.empty() || shapes.empty())
        throw UsageError("sweep: every axis (k, grids, shapes) needs at least one value");

    struct Cell
    {
        SurfaceSpec shape;
        double k;
        int nt, np;
    };
    std::vector<Cell> cells;
    double cost = 0.0;
    for (const SurfaceSpec &s : shapes)
        for (double k : f.ks)
            for (const std::string &g : f.grids)
            {
                const auto [nt, np] = parse_grid(g);
                cells.push_back({s, k, nt, np});
                const double n = static_cast<double>(nt) * np;
                cost += n * n * n;
            }
    json axes{{"k", f.ks}, {"grids", f.grids}, {"bc", to_json(bc)}, {"alpha", {alpha.x(), alpha.y(), alpha.z()}}};
    axes["shapes"] = json::array();
    for (const SurfaceSpec &s : shapes)
        axes["shapes"].push_back(to_json(s));
    ctx.manifest.config = axes;
    ctx.manifest.config["budget"] = f.budget;
    if (cost > f.budget)
        throw UsageError("sweep: estimated cost " + format_double(cost) + " (cells x N^3) exceeds the budget " +
                         format_double(f.budget));
    if (ctx.plan({{"cells", cells.size()}, {"cost_estimate", cost}}))
        return exit_ok;

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> rows(cells.size());
    std::vector<std::string> errors(cells.size());
    const long nc = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
    for (long i = 0; i < nc; ++i)
    {
        const Cell &c = cells[i];
        try
        {
            const BoundarySolution sol = solve_scattering(discretize(c.shape, c.nt, c.np), bc,
                                                          Incidence::plane_wave(alpha), Wavenumber(c.k));
            const SphereGrid g = sphere_grid(16, 32);
            const FarFieldPattern p = far_field(sol, g);
            double err = std::numeric_limits<double>::quiet_NaN();
            if (c.shape.is_sphere() && c.shape.center().norm() == 0.0)
                err = relative_l2(p, mie_far_field(c.shape.mean_radius(), bc, Wavenumber(c.k), alpha, g));
            std::ostringstream row;
            row << c.shape.label() << ',' << format_double(c.k) << ',' << c.nt << ',' << c.np << ','
                << c.nt * c.np << ',' << format_double(err) << ',' << format_double(sol.condition_estimate) << ','
                << format_double(p.norm_squared());
            rows[i] = row.str();
        }
        catch (const std::exception &e)
        {
            errors[i] = e.what();
        }
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (!errors[i].empty())
            throw SolverError("sweep cell " + std::to_string(i) + ": " + errors[i]);
    ctx.manifest.timings["sweep"] = seconds_since(t0);

    std::string csv = "shape,k,n_theta,n_phi,nodes,oracle_error,condition_estimate,far_field_norm_squared\n";
    for (const std::string &r : rows)
        csv += r + "\n";
    ctx.emit("sweep.csv", csv);
    ctx.out << csv;
    return exit_ok;
}

int cmd_mesh_dump(Context &ctx, const ScenarioFlags &flags)
{
    const ScenarioConfig s = flags.resolve();
    ctx.manifest.config = to_json(s);
    if (ctx.plan({{"nodes", s.n_theta * s.n_phi}}))
        return exit_ok;
    const QuadSurface q = discretize(s.surface, s.n_theta, s.n_phi);
    ctx.emit("mesh.csv", mesh_csv(q));
    ctx.out << q.size() << " nodes, area " << format_double(q.area()) << "\n";
    return exit_ok;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err, RunManifest *manifest_out)
{
    CLI::App app("helmscat: exterior Helmholtz obstacle scattering toolkit", "helmscat");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expand all help");

    std::string out_dir = "helmscat-out";
    bool dry_run = false;
    app.add_option("--out-dir", out_dir, "directory for outputs and manifest.json")->capture_default_str();
    app.add_flag("--dry-run", dry_run, "print the plan without solving");
    app.fallthrough();

    ScenarioFlags fwd, grn, mesh;
    CLI::App *forward = app.add_subcommand("forward", "solve a scattering problem, write pattern and density");
    fwd.attach(forward);

    CLI::App *greens = app.add_subcommand("greens", "obstacle Green's function at point pairs");
    grn.attach(greens);
    std::vector<double> gx, gy;
    greens->add_option("--x", gx, "field points (x y z ...)")->required();
    greens->add_option("--y", gy, "source points (x y z ...)")->required();

    CLI::App *oracle = app.add_subcommand("oracle", "partial-wave far field of a sphere");
    double o_radius = 1.0, o_k = 1.0, o_hre = 0.0, o_him = 0.0;
    std::string o_bc = "dirichlet";
    std::vector<double> o_alpha;
    std::vector<int> o_far;
    oracle->add_option("--radius", o_radius, "sphere radius")->capture_default_str();
    oracle->add_option("--k", o_k, "wavenumber")->capture_default_str();
    oracle->add_option("--bc", o_bc, "dirichlet | neumann | impedance")->capture_default_str();
    oracle->add_option("--h-re", o_hre, "impedance, real part");
    oracle->add_option("--h-im", o_him, "impedance, imaginary part");
    oracle->add_option("--alpha", o_alpha, "incident direction")->expected(3);
    oracle->add_option("--far", o_far, "far-field grid n_theta n_phi")->expected(2);

    CLI::App *verify = app.add_subcommand("verify", "run the identity-verification suite");
    std::string suite = "fast", identity, v_config;
    verify->add_option("--suite", suite, "fast | slow")->capture_default_str();
    verify->add_option("--identity", identity, "only identities with this name prefix");
    verify->add_option("--config", v_config, "tolerance profile JSON");

    CLI::App *invert = app.add_subcommand("invert", "recover shape and boundary condition from a pattern");
    InvertFlags inv;
    invert->add_option("--data", inv.data, "pattern CSV")->required();
    invert->add_option("--k", inv.k, "wavenumber (default: from the pattern)");
    invert->add_option("--alpha", inv.alpha, "incident direction (default: from the pattern)")->expected(3);
    invert->add_option("--degree", inv.degree, "shape degree")->capture_default_str();
    invert->add_option("--bc", inv.bc, "auto | dirichlet | neumann | impedance")->capture_default_str();
    invert->add_option("--lambda", inv.lambda, "Tikhonov weight")->capture_default_str();
    invert->add_option("--max-iter", inv.max_iter, "iteration cap")->capture_default_str();
    invert->add_option("--grid", inv.grid, "forward grid n_theta n_phi")->expected(2);
    invert->add_option("--h-re", inv.h_re, "impedance hypothesis, real part");
    invert->add_option("--h-im", inv.h_im, "impedance hypothesis, imaginary part");
    invert->add_option("--initial-radius", inv.radius0, "initial sphere radius")->capture_default_str();

    CLI::App *sweep = app.add_subcommand("sweep", "cartesian parameter sweep of forward solves");
    SweepFlags sw;
    sweep->add_option("--config", sw.config, "sweep JSON file");
    sweep->add_option("--k", sw.ks, "wavenumbers")->delimiter(',');
    sweep->add_option("--grids", sw.grids, "grids NTxNP")->delimiter(',');
    sweep->add_option("--shapes", sw.shapes, "sphere | spheroid")->delimiter(',');
    sweep->add_option("--bc", sw.bc, "dirichlet | neumann")->capture_default_str();
    sweep->add_option("--budget", sw.budget, "cap on cells x N^3")->capture_default_str();

    CLI::App *mesh_dump = app.add_subcommand("mesh-dump", "write surface nodes and normals as CSV");
    mesh.attach(mesh_dump);

    if (argc <= 1)
    {
        out << app.help();
        return exit_usage;
    }
    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    }
    catch (const CLI::ParseError &e)
    {
        err << "helmscat: " << e.what() << "\n" << "run 'helmscat --help' for usage\n";
        return exit_usage;
    }

    RunManifest manifest;
    CLI::App *sub = app.get_subcommands().front();
    manifest.subcommand = sub->get_name();

    std::vector<std::string> warnings;
    std::mutex warn_mutex;
    const WarningSink previous = set_warning_sink([&](const std::string &m) {
        std::lock_guard lock(warn_mutex);
        warnings.push_back(m);
        err << "helmscat: warning: " << m << "\n";
    });

    Context ctx{out, err, manifest, fs::path(out_dir), dry_run};
    const auto t0 = std::chrono::steady_clock::now();
    int code = exit_ok;
    try
    {
        if (sub == forward)
            code = cmd_forward(ctx, fwd);
        else if (sub == greens)
            code = cmd_greens(ctx, grn, gx, gy);
        else if (sub == oracle)
            code = cmd_oracle(ctx, o_radius, o_bc, o_hre, o_him, o_k, o_alpha, o_far);
        else if (sub == verify)
            code = cmd_verify(ctx, suite, identity, v_config);
        else if (sub == invert)
            code = cmd_invert(ctx, inv);
        else if (sub == sweep)
            code = cmd_sweep(ctx, sw);
        else
            code = cmd_mesh_dump(ctx, mesh);
    }
    catch (const UsageError &e)
    {
        err << "helmscat: " << e.what() << "\n";
        code = exit_usage;
    }
    catch (const ConfigError &e)
    {
        err << "helmscat: " << e.what() << "\n";
        code = exit_usage;
    }
    catch (const Error &e)
    {
        err << "helmscat: " << e.what() << "\n";
        code = exit_check_failed;
    }
    set_warning_sink(previous);

    manifest.timings["total"] = seconds_since(t0);
    manifest.warnings.insert(manifest.warnings.end(), warnings.begin(), warnings.end());
    manifest.exit_code = code;
    if (!dry_run && code != exit_usage)
    {
        try
        {
            const fs::path p = fs::path(out_dir) / "manifest.json";
            manifest.outputs.push_back(p.string());
            write_text(p, to_json(manifest).dump(2) + "\n");
        }
        catch (const ConfigError &e)
        {
            err << "helmscat: " << e.what() << "\n";
            code = exit_usage;
        }
    }
    if (manifest_out)
        *manifest_out = manifest;
    return code;
}

} // namespace helmscat::cli
