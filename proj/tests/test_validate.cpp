#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "massflow/oracle.hpp"
#include "massflow/validate.hpp"
#include "probes.hpp"
#include "test_support.hpp"

using namespace massflow;

TEST_CASE("solutions built from feasible plans validate cleanly") {
    const Instance inst = testsupport::single_station();
    const EnergyMatrix em = energy_matrix(inst);
    const Solution sol = plan_to_solution(inst, em, DeliveryPlan{{{2}}}, ObjectiveKind::Energy);
    CHECK(check_feasibility(inst, sol).empty());
    CHECK(recompute_objective(inst, em, sol, ObjectiveKind::Energy) ==
          Catch::Approx(3559.325).epsilon(1e-9));
    CHECK(recompute_objective(inst, em, Solution::zeros(1, 1), ObjectiveKind::Energy) == 0.0);
}

TEST_CASE("dimension mismatches are an error, not a violation") {
    const Instance inst = testsupport::single_station();
    CHECK_THROWS_AS(check_feasibility(inst, Solution::zeros(2, 1)), std::invalid_argument);
}

TEST_CASE("each fault probe trips its own family exactly once") {
    for (const probes::Probe& p : probes::all()) {
        INFO("probe: " << p.name);
        const auto violations = check_feasibility(p.inst, p.sol);
        std::map<ConstraintFamily, int> by_family;
        for (const Violation& v : violations) ++by_family[v.family];
        REQUIRE(by_family.count(p.family) == 1);
        CHECK(by_family[p.family] == 1);
        // Nothing else fires, except the documented structural collateral.
        std::map<ConstraintFamily, int> expected_extra;
        for (ConstraintFamily f : p.collateral) ++expected_extra[f];
        for (const auto& [fam, count] : by_family) {
            if (fam == p.family) continue;
            INFO("unexpected family: " << family_name(fam));
            REQUIRE(expected_extra.count(fam) == 1);
            CHECK(count == expected_extra[fam]);
        }
        CHECK(violations.size() == 1 + p.collateral.size());
    }
}

TEST_CASE("probe magnitudes report how far the constraint moved") {
    const auto all = probes::all();
    for (const probes::Probe& p : all) {
        const auto violations = check_feasibility(p.inst, p.sol);
        for (const Violation& v : violations)
            if (v.family == p.family) CHECK(v.magnitude > 1e-6);
    }
    // Spot checks on exact magnitudes.
    const auto storage = all[2];
    REQUIRE(std::string(storage.name) == "storage_cap");
    const auto v = check_feasibility(storage.inst, storage.sol);
    REQUIRE(v.size() == 1);
    CHECK(v[0].i == 1);
    CHECK(v[0].t == 2);
    CHECK(v[0].magnitude == Catch::Approx(1.0));
}

TEST_CASE("violation locations identify the offending cell") {
    const Instance inst = testsupport::two_station(10.0, 5.0, 2);
    const EnergyMatrix em = energy_matrix(inst);
    Solution sol = plan_to_solution(inst, em, DeliveryPlan{{{1}, {1}}}, ObjectiveKind::Energy);
    sol.mass_at(0, 1, 1) -= 3.0;
    sol.mass_at(1, 2, 1) -= 3.0;
    sol.mass_at(0, 2, 1) += 3.0;
    const auto violations = check_feasibility(inst, sol);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].family == ConstraintFamily::MassArcLink);
    CHECK(violations[0].i == 0);
    CHECK(violations[0].j == 2);
    CHECK(violations[0].t == 1);
    CHECK(violations[0].magnitude == Catch::Approx(3.0));
}
