#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wvres/cli/commands.hpp"
#include "wvres/cli/config.hpp"
#include "wvres/cli/validation.hpp"
#include "wvres/errors.hpp"

using namespace wvres;
using namespace wvres::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::string pattern = (fs::temp_directory_path() / "wvres-cli-test-XXXXXX").string();
        REQUIRE(mkdtemp(pattern.data()) != nullptr);
        path = pattern;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small_config(const fs::path& out) {
    RunConfig c = load_config(std::nullopt, {"grid.L=8", "grid.N=401", "output.dir=" + out.string()});
    return c;
}

}  // namespace

TEST_CASE("config file and overrides") {
    TempDir tmp;
    const fs::path file = tmp.path / "run.conf";
    std::ofstream(file) << "# reference well\npotential = steps\n  band = 2   # second band\n"
                           "potential.edges = -1, 0, 1\npotential.values = 2, 2\nflow.discs = 3.1, -0.2, 0.05; 2, -0.1, 0.01\n";
    const auto c = load_config(file.string(), {"delta=0.1", "band=1"});
    CHECK(c.band == 1);
    CHECK(c.delta == 0.1);
    CHECK(c.edges == std::vector<double>{-1.0, 0.0, 1.0});
    REQUIRE(c.discs.size() == 2);
    CHECK(c.discs[0].center == cplx(3.1, -0.2));
    CHECK(c.discs[1].radius == 0.01);
    CHECK(c.potential_spec().family() == PotentialFamily::CompactBump);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(load_config(std::nullopt, {"grid.N=0"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"grid.N=abc"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"nonsense=1"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"delta=0.5"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"flow.schedule=1e-3, 1e-2"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"output.formats=pdf"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"potential=cubic"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::string("/nonexistent/wvres.conf"), {}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"delta"}), ConfigError);
}

TEST_CASE("resolved config round-trips through its own listing") {
    const auto a = load_config(std::nullopt, {"potential=gaussian", "potential.cos=0.1, 0.25", "delta=0.123456789"});
    std::vector<std::string> sets;
    for (const auto& [k, v] : a.entries()) sets.push_back(k + "=" + v);
    const auto b = load_config(std::nullopt, sets);
    CHECK(a.entries() == b.entries());
}

TEST_CASE("run_command exit codes") {
    TempDir tmp;
    std::ostringstream log, err;
    auto c = small_config(tmp.path / "out");
    CHECK(run_command("resonances", c, log, err) == kExitOk);
    CHECK(run_command("region", c, log, err) == kExitOk);
    CHECK(run_command("nope", c, log, err) == kExitConfigError);
    // output directory blocked by a regular file
    std::ofstream(tmp.path / "blocked") << "x";
    c.out_dir = (tmp.path / "blocked").string();
    CHECK(run_command("region", c, log, err) == kExitConfigError);
}

TEST_CASE("resonances outputs: formats and provenance") {
    TempDir tmp;
    std::ostringstream log;
    const auto c = small_config(tmp.path / "out");
    const auto outcome = cmd_resonances(c, log);
    REQUIRE(outcome.files.size() == 3);

    const std::string csv = slurp(tmp.path / "out" / "resonances.csv");
    CHECK(csv.find("# grid.N = 401\n") != std::string::npos);
    const auto header = csv.find("re_z,im_z,multiplicity,band,delta,residual,curve_distance,projector_radius\n");
    REQUIRE(header != std::string::npos);
    std::istringstream rows(csv.substr(header));
    std::string line;
    std::getline(rows, line);
    REQUIRE(std::getline(rows, line));
    const std::string first = line.substr(0, line.find(','));
    CHECK(first.size() == 22);  // d.dddddddddddddddde-XX
    CHECK(first.find('e') == 18);

    const auto json = nlohmann::json::parse(slurp(tmp.path / "out" / "resonances.json"));
    CHECK(json["schema_version"] == 1);
    CHECK(json["config"]["grid.N"] == "401");
    CHECK(json["resonances"].size() == 1);

    const std::string svg = slurp(tmp.path / "out" / "spectrum.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("grid.N = 401") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
    TempDir tmp;
    std::ostringstream log;
    const auto c = small_config(tmp.path / "out");
    cmd_resonances(c, log);
    const std::string a = slurp(tmp.path / "out" / "resonances.csv");
    const std::string b = slurp(tmp.path / "out" / "resonances.json");
    cmd_resonances(c, log);
    CHECK(a == slurp(tmp.path / "out" / "resonances.csv"));
    CHECK(b == slurp(tmp.path / "out" / "resonances.json"));
}

TEST_CASE("zero potential gives an empty table and a curve-only plot") {
    TempDir tmp;
    std::ostringstream log;
    auto c = small_config(tmp.path / "out");
    c.potential = "zero";
    cmd_resonances(c, log);
    const auto json = nlohmann::json::parse(slurp(tmp.path / "out" / "resonances.json"));
    CHECK(json["resonances"].empty());
    const std::string csv = slurp(tmp.path / "out" / "resonances.csv");
    CHECK(csv.substr(csv.size() - 1) == "\n");
    CHECK(csv.rfind("re_z,") != std::string::npos);
    CHECK(csv.substr(csv.rfind("re_z,")).find('\n') == csv.size() - csv.rfind("re_z,") - 1);
}

TEST_CASE("format selection") {
    TempDir tmp;
    std::ostringstream log;
    auto c = small_config(tmp.path / "out");
    c.formats = {"json"};
    const auto outcome = cmd_region(c, log);
    REQUIRE(outcome.files.size() == 1);
    CHECK(outcome.files[0].filename() == "region.json");
    const auto json = nlohmann::json::parse(slurp(outcome.files[0]));
    CHECK(json["schema_version"] == 1);
    CHECK(json["slope_cut_inactive"] == true);
}

TEST_CASE("numerical failures exit with status 3 and leave no output") {
    TempDir tmp;
    std::ostringstream log, err;
    auto c = small_config(tmp.path / "out");
    // gates far below the eigenvalue motion: the resonance cannot be linked
    c.schedule = {1e-3, 3e-4};
    c.initial_gate = 1e-12;
    c.gate_factor = 1e-12;
    c.gate_floor_factor = 1e-12;
    CHECK(run_command("flow", c, log, err) == kExitNumericalFailure);
    CHECK(err.str().find("numerical failure") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp.path / "out" / "trajectories.csv"));
}

TEST_CASE("a perturbed tolerance fails its check") {
    ValidationTolerances tol;
    CHECK(check_projector_rank(tol).passed);
    tol.idempotency = 1e-30;
    CHECK_FALSE(check_projector_rank(tol).passed);
}

TEST_CASE("flow outputs") {
    TempDir tmp;
    std::ostringstream log;
    auto c = small_config(tmp.path / "out");
    c.schedule = {1e-2, 3e-3, 1e-3};
    const auto outcome = cmd_flow(c, log);
    CHECK(outcome.files.size() == 4);
    const auto matches = nlohmann::json::parse(slurp(tmp.path / "out" / "matches.json"));
    CHECK(matches["schema_version"] == 1);
    CHECK(matches["resonances"].size() == 1);
    CHECK(matches["discs"].size() == 1);
    const std::string csv = slurp(tmp.path / "out" / "trajectories.csv");
    CHECK(csv.find("epsilon,re_lambda,im_lambda,trajectory,step,verified\n") != std::string::npos);
}
