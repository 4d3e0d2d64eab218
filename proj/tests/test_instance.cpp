#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "massflow/instance.hpp"
#include "test_support.hpp"

using namespace massflow;

namespace {
const char* kMinimal = R"({
  "stations": [
    {"position_m": 50, "box_mass_kg": 10, "storage_cap": 2, "demand": [2]}
  ],
  "vehicle": {"mass_kg": 100, "cap_boxes": 2, "v_max_mps": 5, "accel_mps2": 1, "decel_mps2": 1},
  "nt": 1,
  "loop_length_m": 100
})";
} // namespace

TEST_CASE("parses a minimal instance and applies physics defaults") {
    const Instance inst = parse_instance(kMinimal);
    REQUIRE(inst.station_count() == 1);
    CHECK(inst.nt == 1);
    CHECK(inst.stations[0].index == 1);
    CHECK(inst.stations[0].demand == std::vector<int>{2});
    CHECK(inst.stations[0].initial_inventory == 0);
    CHECK(inst.physics.g == 9.81);
    CHECK(inst.physics.c_r == 0.01);
    CHECK(validate_instance(inst).empty());
}

TEST_CASE("parse errors carry enough context") {
    SECTION("demand length mismatch") {
        const std::string text = std::string(kMinimal).replace(
            std::string(kMinimal).find("[2]"), 3, "[2, 1]");
        CHECK_THROWS_WITH(parse_instance(text),
                          Catch::Matchers::ContainsSubstring("demand length mismatch"));
    }
    SECTION("unknown key rejected") {
        std::string text = kMinimal;
        text.insert(text.rfind('}'), ", \"color\": 3");
        CHECK_THROWS_WITH(parse_instance(text),
                          Catch::Matchers::ContainsSubstring("unknown key 'color'"));
    }
    SECTION("missing required key") {
        std::string text = kMinimal;
        const auto pos = text.find("\"nt\": 1,");
        text.erase(pos, 8);
        CHECK_THROWS_WITH(parse_instance(text),
                          Catch::Matchers::ContainsSubstring("missing key 'nt'"));
    }
    SECTION("syntax errors report a position") {
        CHECK_THROWS_WITH(parse_instance("{\"stations\": ["),
                          Catch::Matchers::ContainsSubstring("parse error"));
    }
    SECTION("non-integer box count") {
        const std::string text = std::string(kMinimal).replace(
            std::string(kMinimal).find("\"storage_cap\": 2"), 16, "\"storage_cap\": 2.5");
        CHECK_THROWS_WITH(parse_instance(text),
                          Catch::Matchers::ContainsSubstring("must be an integer"));
    }
}

TEST_CASE("render/parse round-trips exactly") {
    for (std::uint64_t seed : {1, 2, 3, 17, 99}) {
        const Instance inst = generate_instance(seed, 3, 4, "uniform");
        CHECK(parse_instance(render_instance(inst)) == inst);
    }
    const Instance bundled =
        parse_instance(testsupport::read_file(testsupport::instance_path("periodic_demo.json")));
    CHECK(parse_instance(render_instance(bundled)) == bundled);
}

TEST_CASE("generation is a pure function of its arguments") {
    const Instance a = generate_instance(1, 3, 2, "uniform");
    const Instance b = generate_instance(1, 3, 2, "uniform");
    CHECK(render_instance(a) == render_instance(b));
    const Instance c = generate_instance(2, 3, 2, "uniform");
    CHECK(render_instance(a) != render_instance(c));
    CHECK_THROWS_AS(generate_instance(1, 3, 2, "bursty"), std::invalid_argument);
}

TEST_CASE("periodic profile repeats its base pattern") {
    const Instance inst = generate_instance(5, 2, 6, "periodic");
    for (const Station& s : inst.stations)
        for (int t = 2; t < inst.nt; ++t) CHECK(s.demand[t] == s.demand[t - 2]);
}

TEST_CASE("every generated instance validates, across many seeds") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const int n = 1 + static_cast<int>(seed % 4);
        const int nt = 1 + static_cast<int>(seed % 3);
        const char* profile = seed % 2 ? "periodic" : "uniform";
        const Instance inst = generate_instance(seed, n, nt, profile);
        CHECK(validate_instance(inst).empty());
    }
}

TEST_CASE("validation flags structural breaches") {
    Instance inst = testsupport::single_station();
    SECTION("valid instance is clean") { CHECK(validate_instance(inst).empty()); }
    SECTION("inventory above storage") {
        inst.stations[0].initial_inventory = 5;
        inst.stations[0].storage_cap = 3;
        const auto v = validate_instance(inst);
        REQUIRE_FALSE(v.empty());
        CHECK_THAT(v[0], Catch::Matchers::ContainsSubstring("inventory exceeds storage"));
    }
    SECTION("single-period consumption above storage") {
        inst.stations[0].storage_cap = 1;
        inst.vehicle.cap_boxes = 10;
        const auto v = validate_instance(inst);
        REQUIRE_FALSE(v.empty());
        CHECK_THAT(v[0], Catch::Matchers::ContainsSubstring("storage infeasible"));
    }
    SECTION("period demand above vehicle capacity") {
        Instance two = testsupport::two_station();
        two.vehicle.cap_boxes = 1;
        const auto v = validate_instance(two);
        REQUIRE_FALSE(v.empty());
        CHECK_THAT(v[0],
                   Catch::Matchers::ContainsSubstring("capacity infeasible at period 1"));
    }
    SECTION("deceleration weaker than rolling resistance") {
        inst.vehicle.decel_mps2 = 0.05;
        const auto v = validate_instance(inst);
        REQUIRE_FALSE(v.empty());
        CHECK_THAT(v[0], Catch::Matchers::ContainsSubstring("deceleration"));
    }
}

TEST_CASE("largest transportable mass") {
    Instance inst = testsupport::two_station(10.0, 20.0, 4);
    CHECK(max_transport_mass(inst) == 180.0);
    inst.vehicle.cap_boxes = 0;
    CHECK(max_transport_mass(inst) == 100.0);
    const Instance one = testsupport::single_station();
    CHECK(max_transport_mass(one) == 120.0);
}
