#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "massflow/branch_bound.hpp"
#include "massflow/oracle.hpp"
#include "massflow/validate.hpp"
#include "test_support.hpp"

using namespace massflow;

TEST_CASE("zero demand solves at the root") {
    const Instance inst = testsupport::zero_demand(2, 2);
    const MilpModel m = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy);
    const BbResult res = solve_bb(m);
    REQUIRE(res.stats.status == SolveStatus::Optimal);
    CHECK(res.stats.best_incumbent == Catch::Approx(0.0).margin(1e-9));
    CHECK(res.stats.nodes_explored == 1);
    REQUIRE(res.solution.has_value());
    CHECK(check_feasibility(inst, *res.solution).empty());
}

TEST_CASE("single-station ground truth") {
    const Instance inst = testsupport::single_station();
    const EnergyMatrix em = energy_matrix(inst);
    const MilpModel m = build_model(inst, em, ObjectiveKind::Energy);
    const BbResult res = solve_bb(m);
    REQUIRE(res.stats.status == SolveStatus::Optimal);
    REQUIRE(res.solution.has_value());
    const Solution& sol = *res.solution;
    CHECK(sol.objective_value == Catch::Approx(3559.325).epsilon(1e-9));
    CHECK(sol.boxes[0][0] == 2.0);
    CHECK(sol.mass_at(0, 1, 1) == Catch::Approx(120.0));
    CHECK(sol.mass_at(1, 2, 1) == Catch::Approx(100.0));
    CHECK(sol.tour[0] == 1.0);
    CHECK(check_feasibility(inst, sol).empty());
    CHECK(recompute_objective(inst, em, sol, ObjectiveKind::Energy) ==
          Catch::Approx(3559.325).epsilon(1e-9));
}

TEST_CASE("depot outflow equals vehicle plus dropped mass on solved instances") {
    for (std::uint64_t seed : {3, 8, 21}) {
        const Instance inst = generate_instance(seed, 3, 2, "uniform");
        const MilpModel m = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy);
        const BbResult res = solve_bb(m);
        REQUIRE(res.stats.status == SolveStatus::Optimal);
        const Solution& sol = *res.solution;
        for (int t = 1; t <= inst.nt; ++t) {
            double out = 0.0;
            for (int j = 1; j <= inst.station_count() + 1; ++j) out += sol.mass_at(0, j, t);
            double expected = inst.vehicle.mass_kg * sol.tour[t - 1];
            for (int i = 1; i <= inst.station_count(); ++i)
                expected += inst.stations[i - 1].box_mass_kg * sol.boxes[i - 1][t - 1];
            CHECK(out == Catch::Approx(expected).margin(1e-6 * max_transport_mass(inst)));
        }
    }
}

TEST_CASE("matches the exhaustive optimum across random instances") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const int n = 1 + static_cast<int>(seed % 3);
        const int nt = 1 + static_cast<int>(seed % 2);
        const Instance inst =
            generate_instance(seed, n, nt, seed % 2 ? "periodic" : "uniform");
        const EnergyMatrix em = energy_matrix(inst);
        const MilpModel m = build_model(inst, em, ObjectiveKind::Energy);
        const BbResult res = solve_bb(m);
        REQUIRE(res.stats.status == SolveStatus::Optimal);
        const OracleResult oracle = enumerate_optimal(inst, em, ObjectiveKind::Energy);
        const double scale = std::max(1.0, std::abs(oracle.objective));
        CHECK(std::abs(res.stats.best_incumbent - oracle.objective) <= 1e-6 * scale);
        REQUIRE(res.solution.has_value());
        CHECK(check_feasibility(inst, *res.solution).empty());
        const double recomputed =
            recompute_objective(inst, em, *res.solution, ObjectiveKind::Energy);
        CHECK(std::abs(recomputed - res.stats.best_incumbent) <= 1e-6 * scale);
        ++checked;
    }
    CHECK(checked == 30);
}

TEST_CASE("child relaxations never undercut their parents") {
    const Instance inst = generate_instance(12, 3, 2, "uniform");
    const MilpModel m = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy);
    BranchHooks hooks;
    long observed = 0;
    hooks.bound_check = [&observed](double parent, double child) {
        ++observed;
        REQUIRE(child >= parent - 1e-7 * std::max(1.0, std::abs(parent)));
    };
    const BbResult res = solve_bb(m, {}, hooks);
    REQUIRE(res.stats.status == SolveStatus::Optimal);
    if (res.stats.nodes_explored > 1) CHECK(observed > 0);
}

TEST_CASE("identical runs produce identical stats and solutions") {
    const Instance inst = generate_instance(4, 3, 2, "periodic");
    const MilpModel m = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy);
    const BbResult a = solve_bb(m);
    const BbResult b = solve_bb(m);
    CHECK(a.stats.nodes_explored == b.stats.nodes_explored);
    CHECK(a.stats.lp_iterations == b.stats.lp_iterations);
    CHECK(a.stats.best_incumbent == b.stats.best_incumbent);
    CHECK(a.stats.best_bound == b.stats.best_bound);
    REQUIRE(a.solution.has_value());
    REQUIRE(b.solution.has_value());
    CHECK(a.solution->boxes == b.solution->boxes);
    CHECK(a.solution->mass == b.solution->mass);
    CHECK(a.solution->arc == b.solution->arc);
}

TEST_CASE("node limit yields an honest partial status") {
    const Instance inst = parse_instance(
        testsupport::read_file(testsupport::instance_path("periodic_demo.json")));
    const MilpModel m = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy);
    SolveLimits limits;
    limits.node_limit = 1;
    const BbResult res = solve_bb(m, limits);
    CHECK((res.stats.status == SolveStatus::Feasible || res.stats.status == SolveStatus::Limit ||
           res.stats.status == SolveStatus::Optimal));
    if (res.stats.status != SolveStatus::Optimal)
        CHECK(res.stats.nodes_explored <= 1);
    if (res.solution)
        CHECK(res.stats.best_bound <=
              res.stats.best_incumbent + 1e-9 * std::abs(res.stats.best_incumbent));
}

TEST_CASE("an unsatisfiable model reports infeasible") {
    const Instance inst = testsupport::single_station();
    MilpModel m = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy);
    m.vars[m.col(VarRole::Tour, 0, 0, 1)].upper = 0.0; // demand with no tour allowed
    const BbResult res = solve_bb(m);
    CHECK(res.stats.status == SolveStatus::Infeasible);
    CHECK_FALSE(res.solution.has_value());
}
