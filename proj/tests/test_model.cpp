#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "massflow/milp.hpp"
#include "test_support.hpp"

using namespace massflow;

namespace {
int count_role(const MilpModel& m, VarRole role) {
    int k = 0;
    for (const auto& [key, col] : m.var_index)
        if (key.role == role) ++k;
    return k;
}
int arcs_of(int n) { return (n + 2) * (n + 1) / 2; }
} // namespace

TEST_CASE("one station, one period: exact variable and constraint counts") {
    const Instance inst = testsupport::single_station();
    const MilpModel m = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy);
    CHECK(m.var_count() == 10);
    CHECK(count_role(m, VarRole::Mass) == 3);
    CHECK(count_role(m, VarRole::Boxes) == 1);
    CHECK(count_role(m, VarRole::Inventory) == 1);
    CHECK(count_role(m, VarRole::Arc) == 3);
    CHECK(count_role(m, VarRole::Stop) == 1);
    CHECK(count_role(m, VarRole::Tour) == 1);
    CHECK(m.con_count() == 14);

    std::set<std::string> names;
    for (const Variable& v : m.vars) names.insert(v.name);
    CHECK(static_cast<int>(names.size()) == m.var_count());

    BuildOptions opts;
    opts.link_stops_to_tour = false;
    const MilpModel bare = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy, opts);
    CHECK(bare.con_count() == 13);
}

TEST_CASE("model size grows with the documented formulas") {
    for (int n : {1, 2, 3, 4}) {
        for (int nt : {1, 2, 3}) {
            Instance inst = testsupport::zero_demand(n, nt);
            const MilpModel m = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy);
            CHECK(m.var_count() == nt * (2 * arcs_of(n) + 3 * n + 1));
            CHECK(m.con_count() == nt * (arcs_of(n) + 7 * n + 4));
        }
    }
}

TEST_CASE("delivery variables are capped by both storage and the vehicle") {
    Instance inst = testsupport::two_station(10.0, 5.0, 1); // cap_boxes = 1 < storage 2
    inst.stations[1].demand = {0};
    const MilpModel m = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy);
    const Variable& z1 = m.vars[m.col(VarRole::Boxes, 1, 0, 1)];
    CHECK(z1.kind == VarKind::Integer);
    CHECK(z1.lower == 0.0);
    CHECK(z1.upper == 1.0);
}

TEST_CASE("zero demand admits the all-zero assignment at objective zero") {
    const Instance inst = testsupport::zero_demand(2, 2);
    const MilpModel m = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy);
    const std::vector<double> zeros(m.var_count(), 0.0);
    const Solution sol = extract_solution(m, zeros);
    CHECK(sol.objective_value == 0.0);
    for (double y : sol.tour) CHECK(y == 0.0);
}

TEST_CASE("distance objective shares the constraint set and swaps coefficients") {
    const Instance inst = testsupport::single_station();
    const EnergyMatrix em = energy_matrix(inst);
    const MilpModel me = build_model(inst, em, ObjectiveKind::Energy);
    const MilpModel md = build_model(inst, em, ObjectiveKind::Distance);
    REQUIRE(me.var_count() == md.var_count());
    REQUIRE(me.con_count() == md.con_count());
    for (int r = 0; r < me.con_count(); ++r) {
        CHECK(me.cons[r].name == md.cons[r].name);
        CHECK(me.cons[r].rhs == md.cons[r].rhs);
    }
    CHECK(md.obj[md.col(VarRole::Arc, 0, 1, 1)] == em.dist(0, 1));
    CHECK(md.obj[md.col(VarRole::Mass, 0, 1, 1)] == 0.0);
    CHECK(me.obj[me.col(VarRole::Mass, 0, 1, 1)] == em.cost(0, 1));
    CHECK(me.obj[me.col(VarRole::Arc, 0, 1, 1)] == 0.0);
}

TEST_CASE("extraction rejects fractional integers and broken flows") {
    const Instance inst = testsupport::single_station();
    const MilpModel m = build_model(inst, energy_matrix(inst), ObjectiveKind::Energy);
    std::vector<double> x(m.var_count(), 0.0);
    x[m.col(VarRole::Boxes, 1, 0, 1)] = 0.5;
    CHECK_THROWS_WITH(extract_solution(m, x),
                      Catch::Matchers::ContainsSubstring("integrality"));
    x[m.col(VarRole::Boxes, 1, 0, 1)] = 1.0;
    // Integral but the flow rows cannot hold with everything else zero.
    CHECK_THROWS_WITH(extract_solution(m, x),
                      Catch::Matchers::ContainsSubstring("infeasible assignment"));
    CHECK_THROWS_AS(extract_solution(m, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("mismatched energy matrix is rejected") {
    const Instance one = testsupport::single_station();
    const Instance two = testsupport::two_station();
    CHECK_THROWS_AS(build_model(one, energy_matrix(two), ObjectiveKind::Energy),
                    std::invalid_argument);
}
