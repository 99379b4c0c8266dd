// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "helmscat/inverse.hpp"
#include "helmscat/verify.hpp"

namespace helmscat
{

using json = nlohmann::ordered_json;

/// Raised for malformed configuration files and unwritable outputs.
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// Lossless decimal rendering (17 significant digits).
std::string format_double(double v);

// surfaces: {"label", "center": [3], "L_geo", "coeffs": [(L_geo+1)^2]} or the
// shorthands {"shape": "sphere", "radius"}, {"shape": "spheroid", "a", "c"},
// {"shape": "perturbed", "r0", "bumps": [[l, m, amp], ...]}, each with an
// optional "center" and "label".
json to_json(const SurfaceSpec &s);
SurfaceSpec surface_from_json(const json &j);

json to_json(const BoundaryCondition &bc); // {"kind", "h_re", "h_im"}
BoundaryCondition bc_from_json(const json &j);

json to_json(const Incidence &inc); // {"type": "plane", "alpha"} | {"type": "point", "position"}
Incidence incidence_from_json(const json &j);

/// One forward problem.
struct ScenarioConfig
{
    SurfaceSpec surface = make_sphere(1.0);
    BoundaryCondition bc;
    Incidence incidence = Incidence::plane_wave({0.0, 0.0, 1.0});
    double k = 1.0;
    int n_theta = 16;
    int n_phi = 32;
    int far_theta = 16; // far-field output grid
    int far_phi = 32;
    double noise = 0.0; // multiplicative complex noise on the emitted pattern
    std::uint64_t seed = 1;
    SolverOptions solver;
};

json to_json(const ScenarioConfig &c);
ScenarioConfig scenario_from_json(const json &j);

json to_json(const SuiteProfile &p);
SuiteProfile profile_from_json(const json &j);

json to_json(const IdentityReport &r);
json to_json(const std::vector<IdentityReport> &reports);
json to_json(const InversionResult &r);
json to_json(const BcClassification &c);
json to_json(const DiscrepancyReport &r);

/// Reads a JSON file; ConfigError on I/O or parse failure.
json read_json(const std::filesystem::path &path);
void write_text(const std::filesystem::path &path, const std::string &text);

/// Pattern CSV: a "# {json}" metadata line, a column header, then
/// theta,phi,beta_x,beta_y,beta_z,weight,re,im per direction.
std::string pattern_csv(const FarFieldPattern &p, const json &meta = json::object());
FarFieldPattern read_pattern_csv(std::istream &in);
FarFieldPattern read_pattern_csv(const std::filesystem::path &path);

/// x,y,z,nx,ny,nz,weight,re,im per node.
std::string density_csv(const BoundarySolution &sol);
/// x,y,z,nx,ny,nz,weight per node.
std::string mesh_csv(const QuadSurface &q);

/// Record of what a CLI run did and wrote.
struct RunManifest
{
    std::string subcommand;
    json config = json::object();
    std::vector<std::string> outputs;
    std::map<std::string, double> timings; // seconds
    std::map<std::string, std::string> profiles;
    std::vector<std::string> warnings;
    int exit_code = 0;
};

json to_json(const RunManifest &m);

} // namespace helmscat
