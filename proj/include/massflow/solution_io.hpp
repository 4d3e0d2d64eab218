#pragma once

// Sparse JSON solution files: zero entries are omitted, every stored entry
// carries explicit indices. Periods are 1-based; node 0 is the depot
// departure and node n+1 the depot return.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"
#include "massflow/milp.hpp"

namespace massflow {

inline const char* objective_kind_name(ObjectiveKind k) {
    return k == ObjectiveKind::Energy ? "energy" : "distance";
}

inline ObjectiveKind objective_kind_from(const std::string& s) {
    if (s == "energy") return ObjectiveKind::Energy;
    if (s == "distance") return ObjectiveKind::Distance;
    throw std::runtime_error("unknown objective kind '" + s + "'");
}

inline std::string write_solution_json(const Solution& s, ObjectiveKind kind) {
    nlohmann::ordered_json j;
    j["format"] = "massflow-solution";
    j["objective_kind"] = objective_kind_name(kind);
    j["n"] = s.n;
    j["nt"] = s.nt;
    j["objective_value"] = s.objective_value;
    auto ival = [](double v) { return static_cast<long long>(std::llround(v)); };

    auto tours = nlohmann::ordered_json::array();
    for (int t = 1; t <= s.nt; ++t)
        if (s.tour[t - 1] != 0.0) tours.push_back({{"t", t}, {"v", ival(s.tour[t - 1])}});
    auto boxes = nlohmann::ordered_json::array();
    auto stops = nlohmann::ordered_json::array();
    auto inv = nlohmann::ordered_json::array();
    for (int i = 1; i <= s.n; ++i)
        for (int t = 1; t <= s.nt; ++t) {
            if (s.boxes[i - 1][t - 1] != 0.0)
                boxes.push_back({{"i", i}, {"t", t}, {"v", ival(s.boxes[i - 1][t - 1])}});
            if (s.stop[i - 1][t - 1] != 0.0)
                stops.push_back({{"i", i}, {"t", t}, {"v", ival(s.stop[i - 1][t - 1])}});
            if (s.inventory[i - 1][t - 1] != 0.0)
                inv.push_back({{"i", i}, {"t", t}, {"v", s.inventory[i - 1][t - 1]}});
        }
    auto arcs = nlohmann::ordered_json::array();
    auto mass = nlohmann::ordered_json::array();
    for (int t = 1; t <= s.nt; ++t)
        for (int i = 0; i <= s.n; ++i)
            for (int jj = i + 1; jj <= s.n + 1; ++jj) {
                if (s.arc_at(i, jj, t) != 0.0)
                    arcs.push_back(
                        {{"i", i}, {"j", jj}, {"t", t}, {"v", ival(s.arc_at(i, jj, t))}});
                if (s.mass_at(i, jj, t) != 0.0)
                    mass.push_back({{"i", i}, {"j", jj}, {"t", t}, {"v", s.mass_at(i, jj, t)}});
            }
    j["tours"] = std::move(tours);
    j["boxes"] = std::move(boxes);
    j["stops"] = std::move(stops);
    j["inventory"] = std::move(inv);
    j["arcs"] = std::move(arcs);
    j["mass"] = std::move(mass);
    return j.dump(2) + "\n";
}

inline std::pair<Solution, ObjectiveKind> read_solution_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("solution parse error: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "massflow-solution")
        throw std::runtime_error("solution parse error: not a massflow-solution file");
    const int n = j.at("n").get<int>();
    const int nt = j.at("nt").get<int>();
    if (n < 1 || nt < 1) throw std::runtime_error("solution parse error: bad dimensions");
    Solution s = Solution::zeros(n, nt);
    s.objective_value = j.at("objective_value").get<double>();
    const ObjectiveKind kind = objective_kind_from(j.at("objective_kind").get<std::string>());

    auto idx_ok = [n, nt](int i, int t) { return i >= 1 && i <= n && t >= 1 && t <= nt; };
    for (const auto& e : j.value("tours", nlohmann::json::array())) {
        const int t = e.at("t").get<int>();
        if (t < 1 || t > nt) throw std::runtime_error("solution parse error: tour period out of range");
        s.tour[t - 1] = e.at("v").get<double>();
    }
    for (const auto& e : j.value("boxes", nlohmann::json::array())) {
        const int i = e.at("i").get<int>(), t = e.at("t").get<int>();
        if (!idx_ok(i, t)) throw std::runtime_error("solution parse error: box index out of range");
        s.boxes[i - 1][t - 1] = e.at("v").get<double>();
    }
    for (const auto& e : j.value("stops", nlohmann::json::array())) {
        const int i = e.at("i").get<int>(), t = e.at("t").get<int>();
        if (!idx_ok(i, t)) throw std::runtime_error("solution parse error: stop index out of range");
        s.stop[i - 1][t - 1] = e.at("v").get<double>();
    }
    for (const auto& e : j.value("inventory", nlohmann::json::array())) {
        const int i = e.at("i").get<int>(), t = e.at("t").get<int>();
        if (!idx_ok(i, t))
            throw std::runtime_error("solution parse error: inventory index out of range");
        s.inventory[i - 1][t - 1] = e.at("v").get<double>();
    }
    auto arc_ok = [n, nt](int i, int jj, int t) {
        return i >= 0 && i < jj && jj <= n + 1 && t >= 1 && t <= nt;
    };
    for (const auto& e : j.value("arcs", nlohmann::json::array())) {
        const int i = e.at("i").get<int>(), jj = e.at("j").get<int>(), t = e.at("t").get<int>();
        if (!arc_ok(i, jj, t)) throw std::runtime_error("solution parse error: arc out of range");
        s.arc_at(i, jj, t) = e.at("v").get<double>();
    }
    for (const auto& e : j.value("mass", nlohmann::json::array())) {
        const int i = e.at("i").get<int>(), jj = e.at("j").get<int>(), t = e.at("t").get<int>();
        if (!arc_ok(i, jj, t)) throw std::runtime_error("solution parse error: mass arc out of range");
        s.mass_at(i, jj, t) = e.at("v").get<double>();
    }
    return {std::move(s), kind};
}

} // namespace massflow
