#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "massflow/instance.hpp"

namespace testsupport {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string instance_dir() {
#ifdef MASSFLOW_INSTANCE_DIR
    return MASSFLOW_INSTANCE_DIR;
#else
    return "instances";
#endif
}

inline std::string instance_path(const std::string& name) {
    return instance_dir() + "/" + name;
}

// Mirrors instances/single_station.json.
inline massflow::Instance single_station() {
    massflow::Instance inst;
    inst.nt = 1;
    inst.loop_length_m = 100.0;
    inst.vehicle = {100.0, 2, 5.0, 1.0, 1.0};
    massflow::Station s;
    s.index = 1;
    s.position_m = 50.0;
    s.box_mass_kg = 10.0;
    s.storage_cap = 2;
    s.initial_inventory = 0;
    s.demand = {2};
    inst.stations.push_back(s);
    return inst;
}

// One station, room to spare: storage 2, vehicle cap 2, single period demand 1.
inline massflow::Instance one_station_slack() {
    massflow::Instance inst = single_station();
    inst.stations[0].demand = {1};
    return inst;
}

inline massflow::Instance zero_demand(int n = 1, int nt = 1) {
    massflow::Instance inst;
    inst.nt = nt;
    inst.vehicle = {100.0, 2, 5.0, 1.0, 1.0};
    for (int i = 1; i <= n; ++i) {
        massflow::Station s;
        s.index = i;
        s.position_m = 30.0 * i;
        s.box_mass_kg = 10.0;
        s.storage_cap = 2;
        s.initial_inventory = 0;
        s.demand.assign(nt, 0);
        inst.stations.push_back(s);
    }
    inst.loop_length_m = 30.0 * n + 40.0;
    return inst;
}

// Two stations with distinct box masses; demand one box each in one period.
inline massflow::Instance two_station(double m1 = 10.0, double m2 = 5.0, int cap_boxes = 2) {
    massflow::Instance inst;
    inst.nt = 1;
    inst.loop_length_m = 100.0;
    inst.vehicle = {100.0, cap_boxes, 5.0, 1.0, 1.0};
    massflow::Station a;
    a.index = 1;
    a.position_m = 30.0;
    a.box_mass_kg = m1;
    a.storage_cap = 2;
    a.demand = {1};
    massflow::Station b;
    b.index = 2;
    b.position_m = 60.0;
    b.box_mass_kg = m2;
    b.storage_cap = 2;
    b.demand = {1};
    inst.stations = {a, b};
    return inst;
}

} // namespace testsupport
