#pragma once

// Ground truth for small instances. A delivery plan is nothing but the box
// counts per (station, period): because the route order is fixed, the stops,
// arcs and leg masses follow uniquely from it. Plans are costed by direct
// mass accounting, and the optimum is found by exhaustive depth-first
// enumeration with feasibility pruning only.

#include <stdexcept>
#include <vector>

#include "massflow/energy.hpp"
#include "massflow/instance.hpp"
#include "massflow/milp.hpp"

namespace massflow {

struct DeliveryPlan {
    std::vector<std::vector<int>> boxes; // [station-1][period-1]

    static DeliveryPlan zeros(int n, int nt) {
        return DeliveryPlan{std::vector<std::vector<int>>(n, std::vector<int>(nt, 0))};
    }
};

// Exact energy of a plan in joules. Throws on an infeasible plan (vehicle or
// storage capacity breached, or a station running dry).
inline double plan_energy(const Instance& inst, const EnergyMatrix& em,
                          const DeliveryPlan& plan) {
    const int n = inst.station_count();
    const int nt = inst.nt;
    if (static_cast<int>(plan.boxes.size()) != n)
        throw std::invalid_argument("plan_energy: plan has wrong station count");
    for (const auto& row : plan.boxes)
        if (static_cast<int>(row.size()) != nt)
            throw std::invalid_argument("plan_energy: plan has wrong period count");

    std::vector<int> il(n);
    for (int i = 0; i < n; ++i) il[i] = inst.stations[i].initial_inventory;
    for (int t = 0; t < nt; ++t) {
        int total = 0;
        for (int i = 0; i < n; ++i) {
            const Station& s = inst.stations[i];
            const int z = plan.boxes[i][t];
            if (z < 0) throw std::runtime_error("infeasible plan: negative delivery");
            if (z + il[i] > s.storage_cap)
                throw std::runtime_error("infeasible plan: storage capacity exceeded");
            total += z;
            il[i] += z - s.demand[t];
            if (il[i] < 0) throw std::runtime_error("infeasible plan: negative inventory");
        }
        if (total > inst.vehicle.cap_boxes)
            throw std::runtime_error("infeasible plan: vehicle capacity exceeded");
    }

    double energy = 0.0;
    for (int t = 0; t < nt; ++t) {
        double carried = inst.vehicle.mass_kg;
        bool any = false;
        for (int i = 0; i < n; ++i)
            if (plan.boxes[i][t] > 0) {
                carried += plan.boxes[i][t] * inst.stations[i].box_mass_kg;
                any = true;
            }
        if (!any) continue; // no tour this period
        int prev = 0;
        for (int i = 0; i < n; ++i) {
            if (plan.boxes[i][t] == 0) continue;
            energy += em.cost(prev, i + 1) * carried;
            carried -= plan.boxes[i][t] * inst.stations[i].box_mass_kg;
            prev = i + 1;
        }
        energy += em.cost(prev, n + 1) * carried; // empty vehicle home
    }
    return energy;
}

struct OracleResult {
    DeliveryPlan plan;
    double objective = 0.0;
};

// Exhaustive optimum over all feasible plans. Guarded to desk scale; the
// search walks deliveries period-major, station-minor, values ascending, so
// ties resolve to the lexicographically smallest plan in that order.
inline OracleResult enumerate_optimal(const Instance& inst, const EnergyMatrix& em,
                                      ObjectiveKind kind) {
    const int n = inst.station_count();
    const int nt = inst.nt;
    int max_cap = 0;
    for (const auto& s : inst.stations) max_cap = std::max(max_cap, s.storage_cap);
    if (n > 4 || nt > 3 || max_cap > 4)
        throw std::invalid_argument(
            "enumerate_optimal: instance too large for exhaustive search (needs n <= 4, "
            "nt <= 3, storage caps <= 4)");

    DeliveryPlan current = DeliveryPlan::zeros(n, nt);
    std::vector<int> il(n);
    for (int i = 0; i < n; ++i) il[i] = inst.stations[i].initial_inventory;

    bool found = false;
    OracleResult best;

    auto objective_of = [&](const DeliveryPlan& p) {
        if (kind == ObjectiveKind::Energy) return plan_energy(inst, em, p);
        int tours = 0;
        for (int t = 0; t < nt; ++t)
            for (int i = 0; i < n; ++i)
                if (p.boxes[i][t] > 0) {
                    ++tours;
                    break;
                }
        return inst.loop_length_m * tours;
    };

    // k enumerates (period, station) cells; cap_left is the vehicle capacity
    // remaining in the current period.
    auto recurse = [&](auto&& self, int k, int cap_left) -> void {
        if (k == n * nt) {
            const double obj = objective_of(current);
            if (!found || obj < best.objective) {
                found = true;
                best.plan = current;
                best.objective = obj;
            }
            return;
        }
        const int t = k / n;
        const int i = k % n;
        const Station& s = inst.stations[i];
        const int zmin = std::max(0, s.demand[t] - il[i]);
        const int zmax = std::min(s.storage_cap - il[i], cap_left);
        const int saved = il[i];
        for (int z = zmin; z <= zmax; ++z) {
            current.boxes[i][t] = z;
            il[i] = saved + z - s.demand[t];
            const int next_cap =
                (i + 1 == n) ? inst.vehicle.cap_boxes : cap_left - z;
            self(self, k + 1, next_cap);
        }
        current.boxes[i][t] = 0;
        il[i] = saved;
    };
    recurse(recurse, 0, inst.vehicle.cap_boxes);

    if (!found) throw std::runtime_error("enumerate_optimal: no feasible plan exists");
    return best;
}

// Expands a plan into the structured solution the model would produce for it.
inline Solution plan_to_solution(const Instance& inst, const EnergyMatrix& em,
                                 const DeliveryPlan& plan, ObjectiveKind kind) {
    const double energy = plan_energy(inst, em, plan); // validates feasibility
    const int n = inst.station_count();
    const int nt = inst.nt;
    Solution s = Solution::zeros(n, nt);

    std::vector<double> il(n);
    for (int i = 0; i < n; ++i) il[i] = inst.stations[i].initial_inventory;
    double dist_total = 0.0;
    for (int t = 1; t <= nt; ++t) {
        double carried = inst.vehicle.mass_kg;
        bool any = false;
        for (int i = 0; i < n; ++i) {
            const int z = plan.boxes[i][t - 1];
            s.boxes[i][t - 1] = z;
            il[i] += z - inst.stations[i].demand[t - 1];
            s.inventory[i][t - 1] = il[i];
            if (z > 0) {
                carried += z * inst.stations[i].box_mass_kg;
                any = true;
                s.stop[i][t - 1] = 1;
            }
        }
        if (!any) continue;
        s.tour[t - 1] = 1;
        int prev = 0;
        for (int i = 0; i < n; ++i) {
            if (plan.boxes[i][t - 1] == 0) continue;
            s.arc_at(prev, i + 1, t) = 1;
            s.mass_at(prev, i + 1, t) = carried;
            dist_total += em.dist(prev, i + 1);
            carried -= plan.boxes[i][t - 1] * inst.stations[i].box_mass_kg;
            prev = i + 1;
        }
        s.arc_at(prev, n + 1, t) = 1;
        s.mass_at(prev, n + 1, t) = carried;
        dist_total += em.dist(prev, n + 1);
    }
    s.objective_value = kind == ObjectiveKind::Energy ? energy : dist_total;
    return s;
}

} // namespace massflow
