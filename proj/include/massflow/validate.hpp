#pragma once

// Independent feasibility audit of a Solution against the instance, one check
// per constraint family, plus objective recomputation from raw values.
//
// Tolerances scale with the quantities a row mixes: rows over box counts use
// 1e-6 * max(1, |rhs|); rows over masses use 1e-6 * max(1, m_max), since mass
// quantities span several orders of magnitude.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "massflow/energy.hpp"
#include "massflow/instance.hpp"
#include "massflow/milp.hpp"

namespace massflow {

enum class ConstraintFamily {
    DemandFlow,
    VehicleCap,
    StorageCap,
    TourCoupling,
    VehicleMassReturn,
    StopLink,
    ArcDegree,
    MassArcLink,
    Domain,
};

inline const char* family_name(ConstraintFamily f) {
    switch (f) {
        case ConstraintFamily::DemandFlow: return "demand_flow";
        case ConstraintFamily::VehicleCap: return "vehicle_cap";
        case ConstraintFamily::StorageCap: return "storage_cap";
        case ConstraintFamily::TourCoupling: return "tour_coupling";
        case ConstraintFamily::VehicleMassReturn: return "vehicle_mass_return";
        case ConstraintFamily::StopLink: return "stop_link";
        case ConstraintFamily::ArcDegree: return "arc_degree";
        case ConstraintFamily::MassArcLink: return "mass_arc_link";
        case ConstraintFamily::Domain: return "domain";
    }
    return "?";
}

// One violated constraint; indices are -1 where not applicable. For arc
// degrees the in/out pair at a station is one chained equation and reports as
// a single violation; the depot closure rows report with i = 0 and i = n+1.
struct Violation {
    ConstraintFamily family;
    int i = -1;
    int j = -1;
    int t = -1;
    double magnitude = 0.0;
};

inline std::vector<Violation> check_feasibility(const Instance& inst, const Solution& sol) {
    const int n = inst.station_count();
    const int nt = inst.nt;
    if (sol.n != n || sol.nt != nt)
        throw std::invalid_argument("check_feasibility: solution dimensions do not match instance");

    const double m_max = max_transport_mass(inst);
    const double mass_tol = 1e-6 * std::max(1.0, m_max);
    auto box_tol = [](double rhs) { return 1e-6 * std::max(1.0, std::abs(rhs)); };

    std::vector<Violation> out;
    auto il_prev = [&](int i, int t) {
        return t == 1 ? static_cast<double>(inst.stations[i - 1].initial_inventory)
                      : sol.inventory[i - 1][t - 2];
    };

    for (int t = 1; t <= nt; ++t) {
        for (int i = 1; i <= n; ++i) {
            const Station& st = inst.stations[i - 1];
            const double z = sol.boxes[i - 1][t - 1];
            const double gap = z + il_prev(i, t) - st.demand[t - 1] - sol.inventory[i - 1][t - 1];
            if (std::abs(gap) > box_tol(st.demand[t - 1]))
                out.push_back({ConstraintFamily::DemandFlow, i, -1, t, std::abs(gap)});
        }
    }
    for (int t = 1; t <= nt; ++t) {
        double total = 0.0;
        for (int i = 1; i <= n; ++i) total += sol.boxes[i - 1][t - 1];
        const double gap = total - inst.vehicle.cap_boxes * sol.tour[t - 1];
        if (gap > box_tol(inst.vehicle.cap_boxes))
            out.push_back({ConstraintFamily::VehicleCap, -1, -1, t, gap});
    }
    for (int t = 1; t <= nt; ++t)
        for (int i = 1; i <= n; ++i) {
            const double gap =
                sol.boxes[i - 1][t - 1] + il_prev(i, t) - inst.stations[i - 1].storage_cap;
            if (gap > box_tol(inst.stations[i - 1].storage_cap))
                out.push_back({ConstraintFamily::StorageCap, i, -1, t, gap});
        }
    for (int t = 1; t <= nt; ++t)
        for (int i = 1; i <= n; ++i) {
            double inflow = 0.0, outflow = 0.0;
            for (int j = 0; j < i; ++j) inflow += sol.mass_at(j, i, t);
            for (int j = i + 1; j <= n + 1; ++j) outflow += sol.mass_at(i, j, t);
            const double gap = inst.stations[i - 1].box_mass_kg * sol.boxes[i - 1][t - 1] -
                               (inflow - outflow);
            if (std::abs(gap) > mass_tol)
                out.push_back({ConstraintFamily::TourCoupling, i, -1, t, std::abs(gap)});
        }
    for (int t = 1; t <= nt; ++t) {
        double back = 0.0;
        for (int i = 0; i <= n; ++i) back += sol.mass_at(i, n + 1, t);
        const double gap = back - inst.vehicle.mass_kg * sol.tour[t - 1];
        if (std::abs(gap) > mass_tol)
            out.push_back({ConstraintFamily::VehicleMassReturn, -1, -1, t, std::abs(gap)});
    }
    for (int t = 1; t <= nt; ++t)
        for (int i = 1; i <= n; ++i) {
            const double gap = sol.boxes[i - 1][t - 1] -
                               inst.stations[i - 1].storage_cap * sol.stop[i - 1][t - 1];
            if (gap > box_tol(inst.stations[i - 1].storage_cap))
                out.push_back({ConstraintFamily::StopLink, i, -1, t, gap});
        }
    for (int t = 1; t <= nt; ++t) {
        for (int i = 1; i <= n; ++i) {
            double in_deg = 0.0, out_deg = 0.0;
            for (int j = 0; j < i; ++j) in_deg += sol.arc_at(j, i, t);
            for (int j = i + 1; j <= n + 1; ++j) out_deg += sol.arc_at(i, j, t);
            const double x = sol.stop[i - 1][t - 1];
            const double dev = std::max(std::abs(in_deg - x), std::abs(out_deg - x));
            if (dev > box_tol(1.0))
                out.push_back({ConstraintFamily::ArcDegree, i, -1, t, dev});
        }
        double from_depot = 0.0, to_depot = 0.0;
        for (int j = 1; j <= n + 1; ++j) from_depot += sol.arc_at(0, j, t);
        for (int i = 0; i <= n; ++i) to_depot += sol.arc_at(i, n + 1, t);
        const double y = sol.tour[t - 1];
        if (std::abs(from_depot - y) > box_tol(1.0))
            out.push_back({ConstraintFamily::ArcDegree, 0, -1, t, std::abs(from_depot - y)});
        if (std::abs(to_depot - y) > box_tol(1.0))
            out.push_back({ConstraintFamily::ArcDegree, n + 1, -1, t, std::abs(to_depot - y)});
    }
    for (int t = 1; t <= nt; ++t)
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n + 1; ++j) {
                const double gap = sol.mass_at(i, j, t) - m_max * sol.arc_at(i, j, t);
                if (gap > mass_tol)
                    out.push_back({ConstraintFamily::MassArcLink, i, j, t, gap});
            }
    // Domains: deliveries are whole nonnegative boxes, indicators are binary,
    // masses and inventories nonnegative.
    for (int t = 1; t <= nt; ++t) {
        for (int i = 1; i <= n; ++i) {
            const double z = sol.boxes[i - 1][t - 1];
            const double zfrac = std::abs(z - std::round(z));
            if (zfrac > 1e-6 || z < -1e-6)
                out.push_back({ConstraintFamily::Domain, i, -1, t, std::max(zfrac, -z)});
            const double x = sol.stop[i - 1][t - 1];
            if (std::abs(x - std::round(x)) > 1e-6 || x < -1e-6 || x > 1.0 + 1e-6)
                out.push_back({ConstraintFamily::Domain, i, -1, t,
                               std::max(std::abs(x - std::round(x)), std::max(-x, x - 1.0))});
            if (sol.inventory[i - 1][t - 1] < -box_tol(1.0))
                out.push_back(
                    {ConstraintFamily::Domain, i, -1, t, -sol.inventory[i - 1][t - 1]});
        }
        const double y = sol.tour[t - 1];
        if (std::abs(y - std::round(y)) > 1e-6 || y < -1e-6 || y > 1.0 + 1e-6)
            out.push_back({ConstraintFamily::Domain, -1, -1, t,
                           std::max(std::abs(y - std::round(y)), std::max(-y, y - 1.0))});
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n + 1; ++j) {
                const double a = sol.arc_at(i, j, t);
                if (std::abs(a - std::round(a)) > 1e-6 || a < -1e-6 || a > 1.0 + 1e-6)
                    out.push_back({ConstraintFamily::Domain, i, j, t,
                                   std::max(std::abs(a - std::round(a)),
                                            std::max(-a, a - 1.0))});
                if (sol.mass_at(i, j, t) < -mass_tol)
                    out.push_back(
                        {ConstraintFamily::Domain, i, j, t, -sol.mass_at(i, j, t)});
            }
    }
    return out;
}

// Objective of a solution computed from its raw flows, independent of
// whatever a solver reported.
inline double recompute_objective(const Instance& inst, const EnergyMatrix& em,
                                  const Solution& sol, ObjectiveKind kind) {
    const int n = inst.station_count();
    double total = 0.0;
    for (int t = 1; t <= inst.nt; ++t)
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n + 1; ++j)
                total += kind == ObjectiveKind::Energy ? em.cost(i, j) * sol.mass_at(i, j, t)
                                                       : em.dist(i, j) * sol.arc_at(i, j, t);
    return total;
}

} // namespace massflow
