// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helmscat/cli.hpp"
#include "helmscat/oracle.hpp"

using namespace helmscat;
namespace fs = std::filesystem;

namespace
{

struct Run
{
    int code;
    std::string out, err;
    RunManifest manifest;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "helmscat");
    std::vector<const char *> argv;
    for (const std::string &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err, &r.manifest);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / "helmscat-cli-test" / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> csv_rows(const std::string &text)
{
    std::vector<std::string> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        rows.push_back(line);
    return rows;
}

} // namespace

TEST_CASE("usage contract", "[cli]")
{
    const Run none = run({});
    CHECK(none.code == cli::exit_usage);
    CHECK(none.out.find("forward") != std::string::npos);
    CHECK(run({"forward", "--no-such-flag"}).code == cli::exit_usage);
    CHECK(run({"frobnicate"}).code == cli::exit_usage);
    CHECK(run({"--help"}).code == cli::exit_ok);
    // the installed binary honours the same contract
    const std::string cmd = std::string(HELMSCAT_CLI) + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == cli::exit_usage);
}

TEST_CASE("oracle output matches the golden file bitwise", "[cli]")
{
    const fs::path dir = scratch("oracle");
    const Run r = run({"--out-dir", dir.string(), "oracle", "--radius", "1", "--k", "1", "--bc", "dirichlet"});
    REQUIRE(r.code == cli::exit_ok);
    CHECK(slurp(dir / "pattern.csv") == slurp(fs::path(HELMSCAT_TEST_DATA) / "oracle_dirichlet_k1.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("dry run writes nothing", "[cli]")
{
    const fs::path dir = scratch("dry");
    const Run r = run({"--out-dir", dir.string(), "--dry-run", "forward", "--shape", "sphere", "--k", "1"});
    CHECK(r.code == cli::exit_ok);
    CHECK_FALSE(fs::exists(dir));
    const json j = json::parse(r.out);
    CHECK(j["dry_run"] == true);
    CHECK(j["plan"]["nodes"] == 512.0);
}

TEST_CASE("forward run lists every output in the manifest", "[cli]")
{
    const fs::path dir = scratch("forward");
    const Run r = run({"--out-dir", dir.string(), "forward", "--shape", "spheroid", "--a", "1", "--c", "1.3", "--k",
                       "1", "--grid", "8", "16", "--far", "6", "12"});
    REQUIRE(r.code == cli::exit_ok);
    for (const std::string &f : {"density.csv", "pattern.csv", "manifest.json"})
        CHECK(fs::exists(dir / f));
    const json m = read_json(dir / "manifest.json");
    CHECK(m["subcommand"] == "forward");
    CHECK(m["outputs"].size() == 3);
    CHECK(m["exit_code"] == 0);
    // the snapshot reproduces the run bitwise
    const fs::path cfg = dir / "snapshot.json";
    write_text(cfg, m["config"].dump());
    const fs::path dir2 = scratch("forward2");
    REQUIRE(run({"--out-dir", dir2.string(), "forward", "--config", cfg.string()}).code == cli::exit_ok);
    CHECK(slurp(dir / "pattern.csv") == slurp(dir2 / "pattern.csv"));
}

TEST_CASE("malformed and unwritable inputs", "[cli]")
{
    const fs::path dir = scratch("bad");
    fs::create_directories(dir);
    write_text(dir / "bad.json", "{ not json");
    CHECK(run({"--out-dir", dir.string(), "forward", "--config", (dir / "bad.json").string()}).code ==
          cli::exit_usage);
    CHECK(run({"--out-dir", "/proc/helmscat", "oracle"}).code == cli::exit_usage);
    CHECK(run({"forward", "--shape", "spheroid", "--k", "1"}).code == cli::exit_usage);
}

TEST_CASE("verify a single identity", "[cli]")
{
    const fs::path dir = scratch("verify");
    const Run r = run({"--out-dir", dir.string(), "verify", "--identity", "lemma2.identical"});
    CHECK(r.code == cli::exit_ok);
    const json rep = read_json(dir / "report.json");
    REQUIRE(rep.size() == 1);
    CHECK(rep[0]["pass"] == true);
    CHECK(r.out.find("1/1 identities pass") != std::string::npos);
    CHECK(run({"--out-dir", dir.string(), "verify", "--identity", "nothing"}).code == cli::exit_usage);
}

TEST_CASE("verify with the shipped profile file", "[cli]")
{
    const fs::path dir = scratch("verify-config");
    const std::string cfg = std::string(HELMSCAT_CONFIG_DIR) + "/profiles/fast.json";
    const Run r = run({"--out-dir", dir.string(), "verify", "--config", cfg, "--identity", "optical_theorem.oracle"});
    CHECK(r.code == cli::exit_ok);
    CHECK(r.manifest.profiles.at("fast") == fast_profile().version);
}

TEST_CASE("sweep", "[cli]")
{
    SECTION("oracle error decreases with the grid")
    {
        const fs::path dir = scratch("sweep");
        const Run r = run({"--out-dir", dir.string(), "sweep", "--k", "0.5,1,2", "--grids", "6x12,16x32",
                           "--shapes", "sphere"});
        REQUIRE(r.code == cli::exit_ok);
        const auto rows = csv_rows(slurp(dir / "sweep.csv"));
        REQUIRE(rows.size() == 7);
        CHECK(rows[0] == "shape,k,n_theta,n_phi,nodes,oracle_error,condition_estimate,far_field_norm_squared");
        for (int i = 0; i < 3; ++i)
        {
            auto err = [](const std::string &row) {
                std::vector<std::string> c;
                std::stringstream ss(row);
                std::string cell;
                while (std::getline(ss, cell, ','))
                    c.push_back(cell);
                return std::stod(c.at(5));
            };
            CHECK(err(rows[2 + 2 * i]) <= err(rows[1 + 2 * i]));
        }
    }
    SECTION("identical reruns give identical bytes")
    {
        const fs::path a = scratch("sweep-a"), b = scratch("sweep-b");
        const std::vector<std::string> args{"sweep", "--k", "1,1.5", "--grids", "8x16", "--shapes", "sphere,spheroid"};
        std::vector<std::string> aa{"--out-dir", a.string()}, bb{"--out-dir", b.string()};
        aa.insert(aa.end(), args.begin(), args.end());
        bb.insert(bb.end(), args.begin(), args.end());
        REQUIRE(run(aa).code == cli::exit_ok);
        REQUIRE(run(bb).code == cli::exit_ok);
        CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
    }
    SECTION("empty axes and budget")
    {
        CHECK(run({"--out-dir", scratch("s1").string(), "sweep"}).code == cli::exit_usage);
        CHECK(run({"--out-dir", scratch("s2").string(), "sweep", "--k", "1"}).code == cli::exit_usage);
        const Run r = run({"--out-dir", scratch("s3").string(), "sweep", "--k", "1", "--grids", "64x128",
                           "--budget", "1e9"});
        CHECK(r.code == cli::exit_usage);
        CHECK(r.err.find("estimated cost") != std::string::npos);
    }
}

TEST_CASE("mesh dump", "[cli]")
{
    const fs::path dir = scratch("mesh");
    REQUIRE(run({"--out-dir", dir.string(), "mesh-dump", "--shape", "sphere", "--grid", "4", "8"}).code ==
            cli::exit_ok);
    CHECK(csv_rows(slurp(dir / "mesh.csv")).size() == 33);
}

TEST_CASE("greens", "[cli]")
{
    const fs::path dir = scratch("greens");
    const Run r = run({"--out-dir", dir.string(), "greens", "--grid", "12", "24", "--x", "2", "0", "0", "--y", "0",
                       "0", "3"});
    REQUIRE(r.code == cli::exit_ok);
    const json j = read_json(dir / "greens.json");
    REQUIRE(j.size() == 1);
    const cplx g(j[0]["re"].get<double>(), j[0]["im"].get<double>());
    const cplx ref = sphere_greens(1.0, Wavenumber(1.0), Vec3(2, 0, 0), Vec3(0, 0, 3));
    CHECK(std::abs(g - ref) < 1e-3 * std::abs(ref));
    CHECK(run({"--out-dir", dir.string(), "greens", "--x", "2", "0", "--y", "0", "0"}).code == cli::exit_usage);
}

TEST_CASE("invert sphere data", "[cli]")
{
    const fs::path dir = scratch("invert");
    REQUIRE(run({"--out-dir", (dir / "data").string(), "oracle", "--far", "8", "16"}).code == cli::exit_ok);
    const Run r = run({"--out-dir", dir.string(), "invert", "--data", (dir / "data" / "pattern.csv").string(),
                       "--degree", "1", "--bc", "dirichlet"});
    CHECK(r.code == cli::exit_ok);
    const json res = read_json(dir / "result.json");
    CHECK(res["misfit"].get<double>() < 1e-4);
    const SurfaceSpec s = surface_from_json(read_json(dir / "surface.json"));
    CHECK(std::abs(s.mean_radius() - 1.0) < 1e-3);
}
