// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include "helmscat/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace helmscat
{

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace
{

json vec_json(const Vec3 &v)
{
    return json::array({v.x(), v.y(), v.z()});
}

Vec3 vec_from(const json &j, const char *what)
{
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(std::string(what) + ": expected a 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <class T>
T get_or(const json &j, const char *key, T fallback)
{
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

/// Runs f, turning JSON type/key errors into ConfigError.
template <class F>
auto guarded(const char *what, F &&f)
{
    try
    {
        return f();
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
    catch (const DomainError &e)
    {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

} // namespace

json to_json(const SurfaceSpec &s)
{
    return {{"label", s.label()}, {"center", vec_json(s.center())}, {"L_geo", s.degree()}, {"coeffs", s.coeffs()}};
}

SurfaceSpec surface_from_json(const json &j)
{
    return guarded("surface", [&] {
        const Vec3 center = j.contains("center") ? vec_from(j["center"], "surface.center") : Vec3::Zero();
        const int degree = get_or(j, "L_geo", default_geometry_degree);
        if (j.contains("coeffs"))
            return SurfaceSpec(get_or<std::string>(j, "label", "surface"), center, degree,
                               j["coeffs"].get<std::vector<double>>());
        const std::string shape = j.at("shape").get<std::string>();
        std::optional<SurfaceSpec> s;
        if (shape == "sphere")
            s = make_sphere(j.at("radius").get<double>(), center, degree);
        else if (shape == "spheroid")
            s = make_spheroid(j.at("a").get<double>(), j.at("c").get<double>(), center, get_or(j, "L_geo", 16));
        else if (shape == "perturbed")
        {
            std::vector<double> c(sh_count(degree), 0.0);
            c[0] = j.at("r0").get<double>() * std::sqrt(4.0 * pi);
            for (const json &b : j.value("bumps", json::array()))
            {
                const int l = b.at(0).get<int>(), m = b.at(1).get<int>();
                if (l > degree || std::abs(m) > l)
                    throw ConfigError("surface.bumps: (l, m) out of range");
                c[sh_index(l, m)] += b.at(2).get<double>();
            }
            s = SurfaceSpec("perturbed", center, degree, c);
        }
        else
            throw ConfigError("surface.shape: unknown shape '" + shape + "'");
        return j.contains("label") ? s->with_label(j["label"].get<std::string>()) : *s;
    });
}

json to_json(const BoundaryCondition &bc)
{
    json j{{"kind", to_string(bc.kind)}};
    if (bc.kind == BcKind::impedance)
    {
        j["h_re"] = bc.h.real();
        j["h_im"] = bc.h.imag();
    }
    return j;
}

BoundaryCondition bc_from_json(const json &j)
{
    return guarded("bc", [&] {
        const BcKind kind = parse_bc_kind(j.at("kind").get<std::string>());
        if (kind == BcKind::impedance)
            return BoundaryCondition::impedance({get_or(j, "h_re", 0.0), get_or(j, "h_im", 0.0)});
        return kind == BcKind::dirichlet ? BoundaryCondition::dirichlet() : BoundaryCondition::neumann();
    });
}

json to_json(const Incidence &inc)
{
    if (inc.is_plane_wave())
        return {{"type", "plane"}, {"alpha", vec_json(inc.direction())}};
    return {{"type", "point"}, {"position", vec_json(inc.source())}};
}

Incidence incidence_from_json(const json &j)
{
    return guarded("incidence", [&] {
        const std::string type = get_or<std::string>(j, "type", "plane");
        if (type == "plane")
            return Incidence::plane_wave(vec_from(j.at("alpha"), "incidence.alpha"));
        if (type == "point")
            return Incidence::point_source(vec_from(j.at("position"), "incidence.position"));
        throw ConfigError("incidence.type: expected 'plane' or 'point'");
    });
}

json to_json(const ScenarioConfig &c)
{
    return {{"surface", to_json(c.surface)},
            {"bc", to_json(c.bc)},
            {"incidence", to_json(c.incidence)},
            {"k", c.k},
            {"n_theta", c.n_theta},
            {"n_phi", c.n_phi},
            {"far_field", {{"n_theta", c.far_theta}, {"n_phi", c.far_phi}}},
            {"noise", {{"level", c.noise}, {"seed", c.seed}}},
            {"tolerances",
             {{"solve", c.solver.tolerance}, {"condition_threshold", c.solver.condition_threshold}}},
            {"max_nodes", c.solver.max_nodes}};
}

ScenarioConfig scenario_from_json(const json &j)
{
    return guarded("scenario", [&] {
        ScenarioConfig c;
        if (j.contains("surface"))
            c.surface = surface_from_json(j["surface"]);
        if (j.contains("bc"))
            c.bc = bc_from_json(j["bc"]);
        if (j.contains("incidence"))
            c.incidence = incidence_from_json(j["incidence"]);
        c.k = get_or(j, "k", c.k);
        c.n_theta = get_or(j, "n_theta", c.n_theta);
        c.n_phi = get_or(j, "n_phi", c.n_phi);
        if (j.contains("far_field"))
        {
            c.far_theta = get_or(j["far_field"], "n_theta", c.far_theta);
            c.far_phi = get_or(j["far_field"], "n_phi", c.far_phi);
        }
        if (j.contains("noise"))
        {
            c.noise = get_or(j["noise"], "level", c.noise);
            c.seed = get_or<std::uint64_t>(j["noise"], "seed", c.seed);
            if (c.noise < 0.0)
                throw ConfigError("scenario.noise.level: must be non-negative");
        }
        if (j.contains("tolerances"))
        {
            c.solver.tolerance = get_or(j["tolerances"], "solve", c.solver.tolerance);
            c.solver.condition_threshold =
                get_or(j["tolerances"], "condition_threshold", c.solver.condition_threshold);
        }
        c.solver.max_nodes = get_or<std::size_t>(j, "max_nodes", c.solver.max_nodes);
        if (!(c.k > 0.0))
            throw ConfigError("scenario.k: must be positive");
        return c;
    });
}

json to_json(const SuiteProfile &p)
{
    auto grid = [](GridSize g) { return json::array({g.n_theta, g.n_phi}); };
    return {{"name", p.name},         {"version", p.version},
            {"desk", grid(p.desk)},   {"oracle", grid(p.oracle)},
            {"fine", grid(p.fine)},   {"default_tolerance", p.default_tolerance},
            {"tolerances", p.tolerances}};
}

SuiteProfile profile_from_json(const json &j)
{
    return guarded("profile", [&] {
        SuiteProfile p;
        auto grid = [&](const char *key, GridSize fallback) {
            if (!j.contains(key))
                return fallback;
            const auto v = j[key].get<std::vector<int>>();
            if (v.size() != 2)
                throw ConfigError(std::string("profile.") + key + ": expected [n_theta, n_phi]");
            return GridSize{v[0], v[1]};
        };
        p.name = j.at("name").get<std::string>();
        p.version = get_or<std::string>(j, "version", p.version);
        p.desk = grid("desk", p.desk);
        p.oracle = grid("oracle", p.oracle);
        p.fine = grid("fine", p.fine);
        p.default_tolerance = get_or(j, "default_tolerance", p.default_tolerance);
        if (j.contains("tolerances"))
            p.tolerances = j["tolerances"].get<std::map<std::string, double>>();
        return p;
    });
}

json to_json(const IdentityReport &r)
{
    json values = json::object();
    for (const auto &[k, v] : r.values)
        values[k] = std::isfinite(v) ? json(v) : json(format_double(v));
    return {{"identity", r.name},
            {"residual", std::isfinite(r.residual) ? json(r.residual) : json(format_double(r.residual))},
            {"tolerance", r.tolerance},
            {"pass", r.pass},
            {"meta", r.meta},
            {"values", values}};
}

json to_json(const std::vector<IdentityReport> &reports)
{
    json a = json::array();
    for (const IdentityReport &r : reports)
        a.push_back(to_json(r));
    return a;
}

json to_json(const BcClassification &c)
{
    json j{{"selected", to_json(c.selected)},
           {"misfits", c.misfits},
           {"gap", c.gap},
           {"noise_floor", c.noise_floor},
           {"ambiguous", c.ambiguous}};
    if (c.fitted_h)
        j["fitted_h"] = {c.fitted_h->real(), c.fitted_h->imag()};
    return j;
}

json to_json(const InversionResult &r)
{
    json j{{"surface", to_json(r.surface)},     {"bc", to_json(r.bc)},
           {"misfit_trace", r.misfit_trace},    {"misfit", r.misfit},
           {"iterations", r.iterations},        {"converged", r.converged},
           {"stop_reason", r.stop_reason},      {"lambda", r.lambda}};
    if (r.classification)
        j["classification"] = to_json(*r.classification);
    if (r.continuation_condition)
        j["continuation_condition"] = *r.continuation_condition;
    return j;
}

json to_json(const DiscrepancyReport &r)
{
    json j{{"arrangement", r.arrangement},
           {"complex_distance", r.complex_distance},
           {"modulus_distance", r.modulus_distance},
           {"noise_floor", r.noise_floor},
           {"distinct", r.distinct}};
    if (r.min_abs_u)
        j["min_abs_u"] = *r.min_abs_u;
    return j;
}

json read_json(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read " + path.string());
    try
    {
        return json::parse(in);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
    if (path.has_parent_path())
    {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text) || !out.flush())
        throw ConfigError("cannot write " + path.string());
}

std::string pattern_csv(const FarFieldPattern &p, const json &meta_in)
{
    json meta = meta_in;
    meta["k"] = p.k;
    if (p.alpha)
        meta["alpha"] = vec_json(*p.alpha);
    meta["n_theta"] = p.n_theta;
    meta["n_phi"] = p.n_phi;
    std::ostringstream os;
    os << "# " << meta.dump() << "\n";
    os << "theta,phi,beta_x,beta_y,beta_z,weight,re,im\n";
    for (std::size_t j = 0; j < p.size(); ++j)
    {
        const Vec3 &b = p.directions[j];
        const auto [th, ph] = angles(b);
        const double w = p.has_grid() ? p.weights[j] : 0.0;
        os << format_double(th) << ',' << format_double(ph) << ',' << format_double(b.x()) << ','
           << format_double(b.y()) << ',' << format_double(b.z()) << ',' << format_double(w) << ','
           << format_double(p.values[j].real()) << ',' << format_double(p.values[j].imag()) << '\n';
    }
    return os.str();
}

FarFieldPattern read_pattern_csv(std::istream &in)
{
    FarFieldPattern p;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw ConfigError("pattern csv: missing metadata line");
    const json meta = guarded("pattern csv metadata", [&] { return json::parse(line.substr(2)); });
    p.k = meta.value("k", 0.0);
    if (meta.contains("alpha"))
        p.alpha = vec_from(meta["alpha"], "pattern alpha");
    p.n_theta = meta.value("n_theta", 0);
    p.n_phi = meta.value("n_phi", 0);
    if (!std::getline(in, line))
        throw ConfigError("pattern csv: missing header");
    bool any_weight = false;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        std::vector<double> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
        {
            try
            {
                f.push_back(std::stod(cell));
            }
            catch (const std::exception &)
            {
                throw ConfigError("pattern csv: bad number '" + cell + "'");
            }
        }
        if (f.size() != 8)
            throw ConfigError("pattern csv: expected 8 columns");
        p.directions.emplace_back(f[2], f[3], f[4]);
        p.weights.push_back(f[5]);
        any_weight = any_weight || f[5] > 0.0;
        p.values.emplace_back(f[6], f[7]);
    }
    if (!any_weight)
        p.weights.clear();
    return p;
}

FarFieldPattern read_pattern_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read " + path.string());
    return read_pattern_csv(in);
}

std::string density_csv(const BoundarySolution &sol)
{
    const QuadSurface &q = *sol.surface;
    std::ostringstream os;
    os << "x,y,z,nx,ny,nz,weight,re,im\n";
    for (std::size_t j = 0; j < q.size(); ++j)
    {
        const Vec3 &x = q.nodes[j], &n = q.normals[j];
        os << format_double(x.x()) << ',' << format_double(x.y()) << ',' << format_double(x.z()) << ','
           << format_double(n.x()) << ',' << format_double(n.y()) << ',' << format_double(n.z()) << ','
           << format_double(q.weights[j]) << ',' << format_double(sol.density[j].real()) << ','
           << format_double(sol.density[j].imag()) << '\n';
    }
    return os.str();
}

std::string mesh_csv(const QuadSurface &q)
{
    std::ostringstream os;
    os << "x,y,z,nx,ny,nz,weight\n";
    for (std::size_t j = 0; j < q.size(); ++j)
    {
        const Vec3 &x = q.nodes[j], &n = q.normals[j];
        os << format_double(x.x()) << ',' << format_double(x.y()) << ',' << format_double(x.z()) << ','
           << format_double(n.x()) << ',' << format_double(n.y()) << ',' << format_double(n.z()) << ','
           << format_double(q.weights[j]) << '\n';
    }
    return os.str();
}

json to_json(const RunManifest &m)
{
    return {{"subcommand", m.subcommand}, {"config", m.config},     {"outputs", m.outputs},
            {"timings", m.timings},       {"profiles", m.profiles}, {"warnings", m.warnings},
            {"exit_code", m.exit_code}};
}

} // namespace helmscat
