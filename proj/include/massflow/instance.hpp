#pragma once

// Problem data for a fixed-route line-feeding system: workstations ordered
// along a one-way loop, served from a single depot by one tow vehicle, with
// per-period box demands. SI units throughout (kg, m, s, J); demands,
// capacities and deliveries are integer box counts.

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace massflow {

struct PhysicsParams {
    double g = 9.81;    // gravitational acceleration, m/s^2
    double c_r = 0.01;  // rolling coefficient, dimensionless
    bool operator==(const PhysicsParams&) const = default;
};

struct VehicleParams {
    double mass_kg = 0.0;    // empty vehicle mass
    int cap_boxes = 0;       // boxes carried per tour
    double v_max_mps = 0.0;  // cruise speed ceiling
    double accel_mps2 = 0.0; // acceleration magnitude
    double decel_mps2 = 0.0; // deceleration magnitude
    bool operator==(const VehicleParams&) const = default;
};

struct Station {
    int index = 0;             // 1..n in route order
    double position_m = 0.0;   // distance from the depot along the route
    double box_mass_kg = 0.0;  // mass of one box delivered here
    int storage_cap = 0;       // boxes the station can hold
    int initial_inventory = 0; // boxes on hand before period 1
    std::vector<int> demand;   // boxes consumed per period, length nt
    bool operator==(const Station&) const = default;
};

struct Instance {
    std::vector<Station> stations;
    VehicleParams vehicle;
    PhysicsParams physics;
    int nt = 0;                 // number of delivery periods
    double loop_length_m = 0.0; // full route length, depot back to depot
    bool operator==(const Instance&) const = default;

    int station_count() const { return static_cast<int>(stations.size()); }
};

// Largest mass the vehicle can ever carry: its own mass plus a full load of
// the heaviest box type. Used as the big-M linking mass flow to arc choice.
inline double max_transport_mass(const Instance& inst) {
    double heaviest = 0.0;
    for (const auto& s : inst.stations) heaviest = std::max(heaviest, s.box_mass_kg);
    return inst.vehicle.mass_kg + static_cast<double>(inst.vehicle.cap_boxes) * heaviest;
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<const char*> allowed,
                                const char* where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known)
            throw std::runtime_error(std::string("instance parse error: unknown key '") +
                                     item.key() + "' in " + where);
    }
}

inline const nlohmann::json& require_key(const nlohmann::json& obj, const char* key,
                                         const char* where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw std::runtime_error(std::string("instance parse error: missing key '") + key +
                                 "' in " + where);
    return *it;
}

inline double as_number(const nlohmann::json& v, const char* key) {
    if (!v.is_number())
        throw std::runtime_error(std::string("instance parse error: '") + key +
                                 "' must be a number");
    return v.get<double>();
}

inline int as_int(const nlohmann::json& v, const char* key) {
    if (!v.is_number_integer())
        throw std::runtime_error(std::string("instance parse error: '") + key +
                                 "' must be an integer");
    return v.get<int>();
}

} // namespace detail

// Parses the JSON instance format. Schema errors (bad syntax, missing or
// unknown keys, demand length mismatches) throw; structural soundness beyond
// the schema is validate_instance's job.
inline Instance parse_instance(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("instance parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("instance parse error: root must be an object");
    detail::reject_unknown_keys(j, {"stations", "vehicle", "physics", "nt", "loop_length_m"},
                                "instance");

    Instance inst;
    inst.nt = detail::as_int(detail::require_key(j, "nt", "instance"), "nt");
    inst.loop_length_m =
        detail::as_number(detail::require_key(j, "loop_length_m", "instance"), "loop_length_m");

    const auto& jv = detail::require_key(j, "vehicle", "instance");
    if (!jv.is_object()) throw std::runtime_error("instance parse error: 'vehicle' must be an object");
    detail::reject_unknown_keys(jv, {"mass_kg", "cap_boxes", "v_max_mps", "accel_mps2", "decel_mps2"},
                                "vehicle");
    inst.vehicle.mass_kg = detail::as_number(detail::require_key(jv, "mass_kg", "vehicle"), "mass_kg");
    inst.vehicle.cap_boxes = detail::as_int(detail::require_key(jv, "cap_boxes", "vehicle"), "cap_boxes");
    inst.vehicle.v_max_mps = detail::as_number(detail::require_key(jv, "v_max_mps", "vehicle"), "v_max_mps");
    inst.vehicle.accel_mps2 = detail::as_number(detail::require_key(jv, "accel_mps2", "vehicle"), "accel_mps2");
    inst.vehicle.decel_mps2 = detail::as_number(detail::require_key(jv, "decel_mps2", "vehicle"), "decel_mps2");

    if (auto it = j.find("physics"); it != j.end()) {
        if (!it->is_object()) throw std::runtime_error("instance parse error: 'physics' must be an object");
        detail::reject_unknown_keys(*it, {"g", "c_r"}, "physics");
        if (auto g = it->find("g"); g != it->end()) inst.physics.g = detail::as_number(*g, "g");
        if (auto cr = it->find("c_r"); cr != it->end()) inst.physics.c_r = detail::as_number(*cr, "c_r");
    }

    const auto& js = detail::require_key(j, "stations", "instance");
    if (!js.is_array()) throw std::runtime_error("instance parse error: 'stations' must be an array");
    int idx = 0;
    for (const auto& e : js) {
        if (!e.is_object()) throw std::runtime_error("instance parse error: station must be an object");
        detail::reject_unknown_keys(
            e, {"position_m", "box_mass_kg", "storage_cap", "initial_inventory", "demand"},
            "station");
        Station s;
        s.index = ++idx;
        s.position_m = detail::as_number(detail::require_key(e, "position_m", "station"), "position_m");
        s.box_mass_kg = detail::as_number(detail::require_key(e, "box_mass_kg", "station"), "box_mass_kg");
        s.storage_cap = detail::as_int(detail::require_key(e, "storage_cap", "station"), "storage_cap");
        if (auto it = e.find("initial_inventory"); it != e.end())
            s.initial_inventory = detail::as_int(*it, "initial_inventory");
        const auto& jd = detail::require_key(e, "demand", "station");
        if (!jd.is_array()) throw std::runtime_error("instance parse error: 'demand' must be an array");
        for (const auto& d : jd) s.demand.push_back(detail::as_int(d, "demand"));
        if (static_cast<int>(s.demand.size()) != inst.nt) {
            std::ostringstream msg;
            msg << "instance parse error: demand length mismatch (station " << idx << ": got "
                << s.demand.size() << ", expected nt=" << inst.nt << ")";
            throw std::runtime_error(msg.str());
        }
        inst.stations.push_back(std::move(s));
    }
    return inst;
}

// Canonical JSON rendering; parse_instance(render_instance(x)) == x.
inline std::string render_instance(const Instance& inst) {
    nlohmann::ordered_json j;
    j["stations"] = nlohmann::ordered_json::array();
    for (const auto& s : inst.stations) {
        nlohmann::ordered_json e;
        e["position_m"] = s.position_m;
        e["box_mass_kg"] = s.box_mass_kg;
        e["storage_cap"] = s.storage_cap;
        e["initial_inventory"] = s.initial_inventory;
        e["demand"] = s.demand;
        j["stations"].push_back(std::move(e));
    }
    j["vehicle"] = {{"mass_kg", inst.vehicle.mass_kg},
                    {"cap_boxes", inst.vehicle.cap_boxes},
                    {"v_max_mps", inst.vehicle.v_max_mps},
                    {"accel_mps2", inst.vehicle.accel_mps2},
                    {"decel_mps2", inst.vehicle.decel_mps2}};
    j["physics"] = {{"g", inst.physics.g}, {"c_r", inst.physics.c_r}};
    j["nt"] = inst.nt;
    j["loop_length_m"] = inst.loop_length_m;
    return j.dump(2) + "\n";
}

// Structural validation plus a period-by-period feasibility screen.
// The screen plays forward the least-commitment policy (deliver in each
// period exactly what consumption requires): if that policy fits the vehicle
// and storage caps, a feasible plan exists; where it does not fit, the
// binding period is reported.
inline std::vector<std::string> validate_instance(const Instance& inst) {
    std::vector<std::string> out;
    auto flag = [&out](const std::ostringstream& m) { out.push_back(m.str()); };

    const int n = inst.station_count();
    if (n < 1) out.emplace_back("instance has no stations");
    if (inst.nt < 1) out.emplace_back("nt must be >= 1");
    if (!(inst.physics.g > 0)) out.emplace_back("g must be positive");
    if (!(inst.physics.c_r > 0 && inst.physics.c_r < 1)) out.emplace_back("c_r must be in (0, 1)");
    if (!(inst.vehicle.mass_kg > 0)) out.emplace_back("vehicle mass must be positive");
    if (!(inst.vehicle.cap_boxes > 0)) out.emplace_back("vehicle box capacity must be positive");
    if (!(inst.vehicle.v_max_mps > 0)) out.emplace_back("v_max must be positive");
    if (!(inst.vehicle.accel_mps2 > 0)) out.emplace_back("acceleration must be positive");
    if (!(inst.vehicle.decel_mps2 > 0)) out.emplace_back("deceleration must be positive");
    // A stop must cost energy: braking has to dissipate faster than rolling
    // resistance alone would.
    if (inst.vehicle.decel_mps2 > 0 &&
        !(inst.vehicle.decel_mps2 > inst.physics.g * inst.physics.c_r)) {
        std::ostringstream m;
        m << "deceleration must exceed g*c_r (" << inst.physics.g * inst.physics.c_r << ")";
        flag(m);
    }

    double prev_pos = 0.0;
    bool shape_ok = inst.nt >= 1;
    for (int i = 0; i < n; ++i) {
        const Station& s = inst.stations[i];
        const int id = i + 1;
        if (s.index != id) {
            std::ostringstream m;
            m << "station " << id << ": index must be " << id;
            flag(m);
        }
        if (!(s.position_m > prev_pos)) {
            std::ostringstream m;
            m << "station " << id << ": positions must be strictly increasing";
            flag(m);
        }
        prev_pos = s.position_m;
        if (!(s.box_mass_kg > 0)) {
            std::ostringstream m;
            m << "station " << id << ": box mass must be positive";
            flag(m);
        }
        if (s.storage_cap < 0) {
            std::ostringstream m;
            m << "station " << id << ": storage capacity must be >= 0";
            flag(m);
        }
        if (s.initial_inventory < 0) {
            std::ostringstream m;
            m << "station " << id << ": initial inventory must be >= 0";
            flag(m);
        }
        if (s.initial_inventory > s.storage_cap) {
            std::ostringstream m;
            m << "station " << id << ": inventory exceeds storage ("
              << s.initial_inventory << " > " << s.storage_cap << ")";
            flag(m);
        }
        if (static_cast<int>(s.demand.size()) != inst.nt) {
            std::ostringstream m;
            m << "station " << id << ": demand length mismatch (got " << s.demand.size()
              << ", expected " << inst.nt << ")";
            flag(m);
            shape_ok = false;
        }
        for (int t = 0; t < static_cast<int>(s.demand.size()); ++t)
            if (s.demand[t] < 0) {
                std::ostringstream m;
                m << "station " << id << ": demand must be >= 0 at period " << t + 1;
                flag(m);
            }
    }
    if (n >= 1 && !(inst.loop_length_m > inst.stations.back().position_m))
        out.emplace_back("loop length must exceed the last station position");

    if (!shape_ok || n < 1) return out;

    std::vector<int> il(n);
    for (int i = 0; i < n; ++i) il[i] = std::max(0, inst.stations[i].initial_inventory);
    for (int t = 0; t < inst.nt; ++t) {
        long needed = 0;
        for (int i = 0; i < n; ++i) {
            const Station& s = inst.stations[i];
            const int need = std::max(0, s.demand[t] - il[i]);
            if (need > s.storage_cap - il[i]) {
                std::ostringstream m;
                m << "storage infeasible at station " << i + 1 << ", period " << t + 1
                  << ": must take " << need << " boxes but can hold only "
                  << s.storage_cap - il[i];
                flag(m);
            }
            needed += need;
            il[i] = std::max(0, il[i] - s.demand[t]);
        }
        if (needed > inst.vehicle.cap_boxes) {
            std::ostringstream m;
            m << "capacity infeasible at period " << t + 1 << ": " << needed
              << " boxes required, vehicle carries " << inst.vehicle.cap_boxes;
            flag(m);
        }
    }
    return out;
}

// Deterministic instance generator. Demands are drawn first; caps and the
// vehicle are then sized so the generated instance always validates.
inline Instance generate_instance(std::uint64_t seed, int n, int nt, std::string_view profile) {
    if (n < 1 || nt < 1) throw std::invalid_argument("generate_instance: n and nt must be >= 1");
    bool periodic = false;
    if (profile == "periodic") periodic = true;
    else if (profile != "uniform")
        throw std::invalid_argument("generate_instance: unknown profile '" + std::string(profile) + "'");

    std::mt19937_64 rng(seed);
    // Modulo draw keeps the stream identical across standard libraries.
    auto draw = [&rng](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    Instance inst;
    inst.nt = nt;
    double pos = 0.0;
    for (int i = 1; i <= n; ++i) {
        Station s;
        s.index = i;
        pos += draw(25, 60);
        s.position_m = pos;
        s.box_mass_kg = draw(5, 40);
        s.initial_inventory = 0;
        s.demand.resize(nt);
        if (periodic) {
            const int plen = std::min(2, nt);
            std::vector<int> base(plen);
            for (auto& b : base) b = draw(0, 2);
            for (int t = 0; t < nt; ++t) s.demand[t] = base[t % plen];
        } else {
            for (auto& d : s.demand) d = draw(0, 2);
        }
        s.storage_cap = *std::max_element(s.demand.begin(), s.demand.end()) + 1;
        inst.stations.push_back(std::move(s));
    }
    inst.loop_length_m = pos + draw(30, 60);

    int worst_period = 0;
    for (int t = 0; t < nt; ++t) {
        int total = 0;
        for (const auto& s : inst.stations) total += s.demand[t];
        worst_period = std::max(worst_period, total);
    }
    inst.vehicle = VehicleParams{100.0, worst_period + 1, 5.0, 1.0, 1.0};
    return inst;
}

} // namespace massflow
