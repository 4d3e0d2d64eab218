#pragma once

// Mass-flow MILP over forward arcs. Flow variables carry kilograms, vehicle
// mass included, so both objectives are linear in the flow:
//   energy   = sum of arc cost (J/kg) * mass on arc
//   distance = sum of arc length * arc-used indicator
//
// Per period t and stations i (nodes 0 and n+1 are the depot):
//   mass[i][j][t]  >= 0       kilograms shipped directly from i to j
//   boxes[i][t]    integer    boxes dropped at station i, bounded by
//                             min(storage cap, vehicle cap)
//   inv[i][t]      >= 0       boxes on hand at i after period t
//   arc[i][j][t]   binary     leg i -> j driven in period t
//   stop[i][t]     binary     vehicle halts at i in period t
//   tour[t]        binary     a tour runs in period t

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "massflow/energy.hpp"
#include "massflow/instance.hpp"

namespace massflow {

enum class VarKind { Continuous, Integer, Binary };
enum class Relation { LessEq, Equal, GreaterEq };
enum class ObjectiveKind { Energy, Distance };

struct LinTerm {
    int col = 0;
    double coef = 0.0;
};

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<LinTerm> terms;
    Relation rel = Relation::Equal;
    double rhs = 0.0;
};

enum class VarRole { Mass, Boxes, Inventory, Arc, Stop, Tour };

struct VarKey {
    VarRole role;
    int i = 0; // station/node, or 0 when not applicable
    int j = 0; // arc head, or 0
    int t = 0; // period, 1-based
    auto operator<=>(const VarKey&) const = default;
};

// A generic bounded linear model, minimization sense. var_index maps the
// structured identity of each column so solutions can be read back.
struct MilpModel {
    std::vector<Variable> vars;
    std::vector<Constraint> cons;
    std::vector<double> obj; // dense, one entry per variable
    std::map<VarKey, int> var_index;
    int n = 0;  // stations
    int nt = 0; // periods

    int var_count() const { return static_cast<int>(vars.size()); }
    int con_count() const { return static_cast<int>(cons.size()); }
    int col(VarRole role, int i, int j, int t) const {
        auto it = var_index.find(VarKey{role, i, j, t});
        if (it == var_index.end()) throw std::out_of_range("MilpModel::col: no such variable");
        return it->second;
    }
};

struct BuildOptions {
    // stop[i][t] <= tour[t]: redundant for integral points but prunes
    // fractional stop patterns from the relaxation.
    bool link_stops_to_tour = true;
};

namespace detail {

inline std::string pad2(int v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d", v);
    return buf;
}

inline std::string mass_name(int i, int j, int t) { return "M" + pad2(i) + pad2(j) + pad2(t); }
inline std::string arc_name(int i, int j, int t) { return "F" + pad2(i) + pad2(j) + pad2(t); }
inline std::string boxes_name(int i, int t) { return "Z" + pad2(i) + pad2(t); }
inline std::string inv_name(int i, int t) { return "I" + pad2(i) + pad2(t); }
inline std::string stop_name(int i, int t) { return "X" + pad2(i) + pad2(t); }
inline std::string tour_name(int t) { return "Y" + pad2(t); }

} // namespace detail

inline MilpModel build_model(const Instance& inst, const EnergyMatrix& em, ObjectiveKind kind,
                             const BuildOptions& opts = {}) {
    const int n = inst.station_count();
    if (em.node_count() != n + 2)
        throw std::invalid_argument("build_model: energy matrix does not match instance");
    const int nt = inst.nt;
    const double m_max = max_transport_mass(inst);
    const double inf = std::numeric_limits<double>::infinity();

    MilpModel m;
    m.n = n;
    m.nt = nt;

    auto add_var = [&m](VarKey key, std::string name, VarKind k, double lo, double hi,
                        double cost) {
        m.var_index.emplace(key, m.var_count());
        m.vars.push_back(Variable{std::move(name), k, lo, hi});
        m.obj.push_back(cost);
    };

    for (int t = 1; t <= nt; ++t) {
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n + 1; ++j)
                add_var(VarKey{VarRole::Mass, i, j, t}, detail::mass_name(i, j, t),
                        VarKind::Continuous, 0.0, inf,
                        kind == ObjectiveKind::Energy ? em.cost(i, j) : 0.0);
        for (int i = 1; i <= n; ++i) {
            const Station& s = inst.stations[i - 1];
            const double zcap = std::min(s.storage_cap, inst.vehicle.cap_boxes);
            add_var(VarKey{VarRole::Boxes, i, 0, t}, detail::boxes_name(i, t), VarKind::Integer,
                    0.0, zcap, 0.0);
        }
        for (int i = 1; i <= n; ++i)
            add_var(VarKey{VarRole::Inventory, i, 0, t}, detail::inv_name(i, t),
                    VarKind::Continuous, 0.0, inf, 0.0);
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n + 1; ++j)
                add_var(VarKey{VarRole::Arc, i, j, t}, detail::arc_name(i, j, t), VarKind::Binary,
                        0.0, 1.0, kind == ObjectiveKind::Distance ? em.dist(i, j) : 0.0);
        for (int i = 1; i <= n; ++i)
            add_var(VarKey{VarRole::Stop, i, 0, t}, detail::stop_name(i, t), VarKind::Binary, 0.0,
                    1.0, 0.0);
        add_var(VarKey{VarRole::Tour, 0, 0, t}, detail::tour_name(t), VarKind::Binary, 0.0, 1.0,
                0.0);
    }

    auto add_con = [&m](std::string name, std::vector<LinTerm> terms, Relation rel, double rhs) {
        m.cons.push_back(Constraint{std::move(name), std::move(terms), rel, rhs});
    };
    auto mass = [&m](int i, int j, int t) { return m.col(VarRole::Mass, i, j, t); };
    auto arc = [&m](int i, int j, int t) { return m.col(VarRole::Arc, i, j, t); };
    auto boxes = [&m](int i, int t) { return m.col(VarRole::Boxes, i, 0, t); };
    auto inv = [&m](int i, int t) { return m.col(VarRole::Inventory, i, 0, t); };
    auto stop = [&m](int i, int t) { return m.col(VarRole::Stop, i, 0, t); };
    auto tour = [&m](int t) { return m.col(VarRole::Tour, 0, 0, t); };

    for (int t = 1; t <= nt; ++t) {
        // Inventory balance: delivered + carried-over - consumed = on hand.
        for (int i = 1; i <= n; ++i) {
            const Station& s = inst.stations[i - 1];
            std::vector<LinTerm> terms{{boxes(i, t), 1.0}, {inv(i, t), -1.0}};
            double rhs = s.demand[t - 1];
            if (t > 1)
                terms.push_back({inv(i, t - 1), 1.0});
            else
                rhs -= s.initial_inventory;
            add_con("DEM" + detail::pad2(i) + detail::pad2(t), std::move(terms), Relation::Equal,
                    rhs);
        }
        // Vehicle box capacity, and no deliveries without a tour.
        {
            std::vector<LinTerm> terms;
            for (int i = 1; i <= n; ++i) terms.push_back({boxes(i, t), 1.0});
            terms.push_back({tour(t), -static_cast<double>(inst.vehicle.cap_boxes)});
            add_con("CAP" + detail::pad2(t), std::move(terms), Relation::LessEq, 0.0);
        }
        // Station storage cap at delivery time.
        for (int i = 1; i <= n; ++i) {
            const Station& s = inst.stations[i - 1];
            std::vector<LinTerm> terms{{boxes(i, t), 1.0}};
            double rhs = s.storage_cap;
            if (t > 1)
                terms.push_back({inv(i, t - 1), 1.0});
            else
                rhs -= s.initial_inventory;
            add_con("STO" + detail::pad2(i) + detail::pad2(t), std::move(terms), Relation::LessEq,
                    rhs);
        }
        // Mass dropped at a station is the gap between inflow and outflow,
        // and must be a whole number of boxes.
        for (int i = 1; i <= n; ++i) {
            std::vector<LinTerm> terms{{boxes(i, t), inst.stations[i - 1].box_mass_kg}};
            for (int j = 0; j < i; ++j) terms.push_back({mass(j, i, t), -1.0});
            for (int j = i + 1; j <= n + 1; ++j) terms.push_back({mass(i, j, t), 1.0});
            add_con("TUR" + detail::pad2(i) + detail::pad2(t), std::move(terms), Relation::Equal,
                    0.0);
        }
        // Whatever returns to the depot is exactly the empty vehicle.
        {
            std::vector<LinTerm> terms;
            for (int i = 0; i <= n; ++i) terms.push_back({mass(i, n + 1, t), 1.0});
            terms.push_back({tour(t), -inst.vehicle.mass_kg});
            add_con("MVR" + detail::pad2(t), std::move(terms), Relation::Equal, 0.0);
        }
        // Delivering forces a stop.
        for (int i = 1; i <= n; ++i)
            add_con("STL" + detail::pad2(i) + detail::pad2(t),
                    {{boxes(i, t), 1.0},
                     {stop(i, t), -static_cast<double>(inst.stations[i - 1].storage_cap)}},
                    Relation::LessEq, 0.0);
        // Stopping at a station selects exactly one incoming and one
        // outgoing arc there.
        for (int i = 1; i <= n; ++i) {
            std::vector<LinTerm> in;
            for (int j = 0; j < i; ++j) in.push_back({arc(j, i, t), 1.0});
            in.push_back({stop(i, t), -1.0});
            add_con("AIN" + detail::pad2(i) + detail::pad2(t), std::move(in), Relation::Equal,
                    0.0);
            std::vector<LinTerm> outd;
            for (int j = i + 1; j <= n + 1; ++j) outd.push_back({arc(i, j, t), 1.0});
            outd.push_back({stop(i, t), -1.0});
            add_con("AOU" + detail::pad2(i) + detail::pad2(t), std::move(outd), Relation::Equal,
                    0.0);
        }
        // Depot closure: a tour leaves node 0 once and enters node n+1 once;
        // the direct arc 0 -> n+1 represents an empty tour.
        {
            std::vector<LinTerm> terms;
            for (int j = 1; j <= n + 1; ++j) terms.push_back({arc(0, j, t), 1.0});
            terms.push_back({tour(t), -1.0});
            add_con("DOT" + detail::pad2(t), std::move(terms), Relation::Equal, 0.0);
        }
        {
            std::vector<LinTerm> terms;
            for (int i = 0; i <= n; ++i) terms.push_back({arc(i, n + 1, t), 1.0});
            terms.push_back({tour(t), -1.0});
            add_con("DIN" + detail::pad2(t), std::move(terms), Relation::Equal, 0.0);
        }
        // Mass may only flow on selected arcs.
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n + 1; ++j)
                add_con("L" + detail::pad2(i) + detail::pad2(j) + detail::pad2(t),
                        {{mass(i, j, t), 1.0}, {arc(i, j, t), -m_max}}, Relation::LessEq, 0.0);
        if (opts.link_stops_to_tour)
            for (int i = 1; i <= n; ++i)
                add_con("XY" + detail::pad2(i) + detail::pad2(t),
                        {{stop(i, t), 1.0}, {tour(t), -1.0}}, Relation::LessEq, 0.0);
    }
    return m;
}

// Structured view of one assignment. Integral fields are stored as doubles so
// raw (possibly perturbed) assignments can be represented and checked.
struct Solution {
    int n = 0;
    int nt = 0;
    std::vector<std::vector<double>> boxes;     // [i-1][t-1]
    std::vector<std::vector<double>> inventory; // [i-1][t-1]
    std::vector<std::vector<double>> stop;      // [i-1][t-1]
    std::vector<double> tour;                   // [t-1]
    // Arc-indexed, dense over 0 <= i < j <= n+1, entry [t-1][i*(n+2)+j].
    std::vector<std::vector<double>> mass;
    std::vector<std::vector<double>> arc;
    double objective_value = 0.0;

    int nodes() const { return n + 2; }
    double& mass_at(int i, int j, int t) { return mass[t - 1][i * nodes() + j]; }
    double mass_at(int i, int j, int t) const { return mass[t - 1][i * nodes() + j]; }
    double& arc_at(int i, int j, int t) { return arc[t - 1][i * nodes() + j]; }
    double arc_at(int i, int j, int t) const { return arc[t - 1][i * nodes() + j]; }

    static Solution zeros(int n, int nt) {
        Solution s;
        s.n = n;
        s.nt = nt;
        s.boxes.assign(n, std::vector<double>(nt, 0.0));
        s.inventory.assign(n, std::vector<double>(nt, 0.0));
        s.stop.assign(n, std::vector<double>(nt, 0.0));
        s.tour.assign(nt, 0.0);
        s.mass.assign(nt, std::vector<double>((n + 2) * (n + 2), 0.0));
        s.arc.assign(nt, std::vector<double>((n + 2) * (n + 2), 0.0));
        return s;
    }
};

// Reads a raw assignment back into a Solution. Integer and binary variables
// must sit within tol of an integer and are snapped exactly; the objective is
// recomputed from the assignment rather than taken from any solver report.
inline Solution extract_solution(const MilpModel& model, const std::vector<double>& x,
                                 double tol = 1e-6) {
    if (static_cast<int>(x.size()) != model.var_count())
        throw std::invalid_argument("extract_solution: assignment length mismatch");
    Solution s = Solution::zeros(model.n, model.nt);
    for (const auto& [key, colv] : model.var_index) {
        double v = x[colv];
        const Variable& var = model.vars[colv];
        if (var.kind != VarKind::Continuous) {
            const double r = std::round(v);
            if (std::abs(v - r) > tol)
                throw std::runtime_error("extract_solution: integrality violated at " + var.name);
            v = r;
        }
        switch (key.role) {
            case VarRole::Mass: s.mass_at(key.i, key.j, key.t) = v; break;
            case VarRole::Boxes: s.boxes[key.i - 1][key.t - 1] = v; break;
            case VarRole::Inventory: s.inventory[key.i - 1][key.t - 1] = v; break;
            case VarRole::Arc: s.arc_at(key.i, key.j, key.t) = v; break;
            case VarRole::Stop: s.stop[key.i - 1][key.t - 1] = v; break;
            case VarRole::Tour: s.tour[key.t - 1] = v; break;
        }
    }
    // Feasibility screening: every row must hold at the assignment. Full
    // constraint-family diagnostics live in the validate module; this is the
    // cheap gate that rejects assignments that never satisfied the model.
    for (const Constraint& con : model.cons) {
        double lhs = 0.0, scale = std::max(1.0, std::abs(con.rhs));
        for (const LinTerm& term : con.terms) {
            lhs += term.coef * x[term.col];
            scale = std::max(scale, std::abs(term.coef * x[term.col]));
        }
        const double gap = lhs - con.rhs;
        const bool bad = (con.rel == Relation::Equal && std::abs(gap) > 1e-6 * scale) ||
                         (con.rel == Relation::LessEq && gap > 1e-6 * scale) ||
                         (con.rel == Relation::GreaterEq && gap < -1e-6 * scale);
        if (bad)
            throw std::runtime_error("extract_solution: infeasible assignment at row " + con.name);
    }
    double obj = 0.0;
    for (int c = 0; c < model.var_count(); ++c) obj += model.obj[c] * x[c];
    s.objective_value = obj;
    return s;
}

} // namespace massflow
