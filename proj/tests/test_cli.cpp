#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "massflow/cli.hpp"
#include "test_support.hpp"

using namespace massflow;
namespace fs = std::filesystem;

namespace {

struct QuietLog {
    QuietLog() { setenv("MASSFLOW_LOG", "quiet", 1); }
};

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "massflow_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::map<std::string, std::string> machine_section(const std::string& report) {
    std::map<std::string, std::string> kv;
    std::istringstream is(report);
    std::string line;
    bool in_machine = false;
    while (std::getline(is, line)) {
        if (line == "---") {
            in_machine = true;
            continue;
        }
        if (!in_machine) continue;
        const auto eq = line.find('=');
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

} // namespace

TEST_CASE("gen writes byte-identical files for identical arguments") {
    QuietLog quiet;
    std::ostringstream out1, out2, err;
    cli::GenOptions opt;
    opt.seed = 1;
    opt.stations = 3;
    opt.periods = 2;
    REQUIRE(cli::cmd_gen(opt, out1, err) == 0);
    REQUIRE(cli::cmd_gen(opt, out2, err) == 0);
    CHECK(out1.str() == out2.str());
    CHECK_FALSE(out1.str().empty());
    cli::GenOptions bad = opt;
    bad.profile = "bursty";
    std::ostringstream out3;
    CHECK(cli::cmd_gen(bad, out3, err) == 1);
}

TEST_CASE("solve on a zero-demand instance exits 0 with objective 0") {
    QuietLog quiet;
    const fs::path dir = scratch_dir();
    const fs::path inst_path = dir / "zero.json";
    cli::write_file(inst_path.string(), render_instance(testsupport::zero_demand(2, 2)));

    cli::SolveOptions opt;
    opt.instance_path = inst_path.string();
    opt.out_path = (dir / "zero.sol.json").string();
    std::ostringstream out, err;
    REQUIRE(cli::cmd_solve(opt, out, err) == 0);
    const auto kv = machine_section(out.str());
    CHECK(kv.at("status") == "optimal");
    CHECK(std::stod(kv.at("objective_value")) == 0.0);
    CHECK(kv.at("tours") == "0");

    cli::ValidateOptions vopt;
    vopt.instance_path = opt.instance_path;
    vopt.solution_path = opt.out_path;
    std::ostringstream vout, verr;
    CHECK(cli::cmd_validate(vopt, vout, verr) == 0);
    CHECK_THAT(vout.str(), Catch::Matchers::ContainsSubstring("feasible"));
}

TEST_CASE("branch-and-bound and the exhaustive method agree on the bundle") {
    QuietLog quiet;
    const fs::path dir = scratch_dir();
    double objectives[2];
    int k = 0;
    for (const char* method : {"bb", "oracle"}) {
        cli::SolveOptions opt;
        opt.instance_path = testsupport::instance_path("single_station.json");
        opt.method = method;
        opt.out_path = (dir / (std::string("single_") + method + ".sol.json")).string();
        std::ostringstream out, err;
        REQUIRE(cli::cmd_solve(opt, out, err) == 0);
        objectives[k++] = std::stod(machine_section(out.str()).at("objective_value"));
    }
    CHECK(objectives[0] == Catch::Approx(3559.325).epsilon(1e-9));
    CHECK(objectives[1] == Catch::Approx(objectives[0]).epsilon(1e-9));
}

TEST_CASE("tampered solutions fail validation with a TSV report") {
    QuietLog quiet;
    const fs::path dir = scratch_dir();
    cli::SolveOptions opt;
    opt.instance_path = testsupport::instance_path("single_station.json");
    opt.out_path = (dir / "tamper.sol.json").string();
    std::ostringstream out, err;
    REQUIRE(cli::cmd_solve(opt, out, err) == 0);

    auto [sol, kind] = read_solution_json(cli::read_file(opt.out_path));
    sol.boxes[0][0] += 1.0; // now exceeds storage and breaks the flow rows
    cli::write_file(opt.out_path, write_solution_json(sol, kind));

    cli::ValidateOptions vopt;
    vopt.instance_path = opt.instance_path;
    vopt.solution_path = opt.out_path;
    std::ostringstream vout, verr;
    CHECK(cli::cmd_validate(vopt, vout, verr) == 1);
    CHECK_THAT(vout.str(), Catch::Matchers::ContainsSubstring("\t"));
}

TEST_CASE("export prints MPS, LP and the energy CSV") {
    QuietLog quiet;
    cli::ExportOptions opt;
    opt.instance_path = testsupport::instance_path("single_station.json");
    for (const char* format : {"mps", "lp", "energy-csv"}) {
        opt.format = format;
        std::ostringstream out, err;
        REQUIRE(cli::cmd_export(opt, out, err) == 0);
        CHECK_FALSE(out.str().empty());
    }
    opt.format = "mps";
    std::ostringstream out, err;
    REQUIRE(cli::cmd_export(opt, out, err) == 0);
    CHECK(out.str().rfind("NAME", 0) == 0);
}

TEST_CASE("unreadable or invalid instances exit 1") {
    QuietLog quiet;
    cli::SolveOptions opt;
    opt.instance_path = "no_such_file.json";
    std::ostringstream out, err;
    CHECK(cli::cmd_solve(opt, out, err) == 1);
    CHECK_THAT(err.str(), Catch::Matchers::ContainsSubstring("cannot read"));
}

TEST_CASE("compare reports ratio 1 when both objectives coincide") {
    QuietLog quiet;
    cli::CompareOptions opt;
    opt.instance_path = testsupport::instance_path("single_station.json");
    std::ostringstream out, err;
    REQUIRE(cli::cmd_compare(opt, out, err) == 0);
    const auto kv = machine_section(out.str());
    CHECK(std::stod(kv.at("energy_ratio")) == Catch::Approx(1.0));
    CHECK(kv.at("energy_run_tours") == kv.at("distance_run_tours"));
}

TEST_CASE("compare exposes the distance/energy gap on the bundled counterexample") {
    QuietLog quiet;
    cli::CompareOptions opt;
    opt.instance_path = testsupport::instance_path("counterexample_distance_vs_energy.json");
    std::ostringstream out, err;
    REQUIRE(cli::cmd_compare(opt, out, err) == 0);
    const auto kv = machine_section(out.str());
    const double e_energy = std::stod(kv.at("energy_run_energy"));
    const double e_distance = std::stod(kv.at("distance_run_energy"));
    CHECK(e_distance > e_energy * 1.01); // at least a 1% penalty for ignoring energy
    CHECK(kv.at("energy_run_tours") == kv.at("distance_run_tours"));
}
