#pragma once

// Per-arc energy cost of moving one kilogram along the route. A leg is driven
// with constant acceleration up to at most v_max, an optional cruise, and a
// constant braking phase. Work is done against inertia while accelerating and
// against rolling resistance while rolling under power; braking consumes
// nothing and the kinetic energy is dissipated.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "massflow/instance.hpp"

namespace massflow {

struct MotionProfile {
    double total_m = 0.0;  // leg distance
    double accel_m = 0.0;  // distance covered while accelerating
    double cruise_m = 0.0; // distance covered at peak speed
    double decel_m = 0.0;  // distance covered while braking
    double peak_mps = 0.0; // speed actually attained
};

// Splits a leg into its three phases. Short legs never reach v_max and come
// out triangular (cruise_m == 0).
inline MotionProfile leg_profile(double dist_m, const VehicleParams& veh) {
    if (dist_m < 0) throw std::invalid_argument("leg_profile: negative distance");
    MotionProfile p;
    p.total_m = dist_m;
    if (dist_m == 0) return p;
    const double aa = veh.accel_mps2;
    const double ad = veh.decel_mps2;
    const double vm = veh.v_max_mps;
    const double full_speed_dist = 0.5 * vm * vm * (1.0 / aa + 1.0 / ad);
    if (dist_m >= full_speed_dist) {
        p.peak_mps = vm;
        p.accel_m = vm * vm / (2.0 * aa);
        p.decel_m = vm * vm / (2.0 * ad);
        p.cruise_m = dist_m - p.accel_m - p.decel_m;
        if (p.cruise_m < 0) p.cruise_m = 0; // boundary round-off
    } else {
        p.peak_mps = std::sqrt(2.0 * aa * ad * dist_m / (aa + ad));
        p.accel_m = p.peak_mps * p.peak_mps / (2.0 * aa);
        p.decel_m = dist_m - p.accel_m;
        p.cruise_m = 0.0;
    }
    return p;
}

// Energy per unit of moving mass for one leg, J/kg. Acceleration distance is
// charged at (a + g*c_r), cruise at g*c_r, braking at zero.
inline double leg_energy_per_mass(double dist_m, const VehicleParams& veh,
                                  const PhysicsParams& phys) {
    const MotionProfile p = leg_profile(dist_m, veh);
    const double roll = phys.g * phys.c_r;
    return (veh.accel_mps2 + roll) * p.accel_m + roll * p.cruise_m;
}

// Time-stepped re-evaluation of the same quantity, kept deliberately
// independent of leg_profile: the vehicle state is marched forward with step
// dt, braking as soon as the remaining distance equals the stopping distance
// at the current speed. First-order accurate in dt.
inline double numeric_leg_energy(double dist_m, const VehicleParams& veh,
                                 const PhysicsParams& phys, double dt) {
    if (dist_m < 0) throw std::invalid_argument("numeric_leg_energy: negative distance");
    if (dt <= 0) throw std::invalid_argument("numeric_leg_energy: dt must be positive");
    if (dist_m == 0) return 0.0;
    const double roll = phys.g * phys.c_r;
    double x = 0.0, v = 0.0, energy = 0.0;
    while (x < dist_m) {
        const double remaining = dist_m - x;
        if (v * v / (2.0 * veh.decel_mps2) >= remaining) break; // braking point; rest is free
        double a = 0.0;
        if (v < veh.v_max_mps) a = std::min(veh.accel_mps2, (veh.v_max_mps - v) / dt);
        const double v_next = v + a * dt;
        const double v_mid = 0.5 * (v + v_next);
        energy += (a + roll) * v_mid * dt;
        x += v_mid * dt;
        v = v_next;
    }
    return energy;
}

// Extra cost per kilogram of inserting one intermediate stop between two
// legs that both reach full speed: the kinetic energy thrown away at the
// brake, less the rolling work the braking distance would have cost anyway.
inline double stop_penalty(const VehicleParams& veh, const PhysicsParams& phys) {
    return 0.5 * veh.v_max_mps * veh.v_max_mps *
           (1.0 - phys.g * phys.c_r / veh.decel_mps2);
}

// Forward-arc tables over route nodes 0..n+1, where node 0 is the depot
// departure and node n+1 the depot return.
class EnergyMatrix {
  public:
    EnergyMatrix() = default;
    explicit EnergyMatrix(int node_count)
        : nodes_(node_count),
          cost_(static_cast<size_t>(node_count) * node_count, 0.0),
          dist_(static_cast<size_t>(node_count) * node_count, 0.0) {}

    int node_count() const { return nodes_; }
    int station_count() const { return nodes_ - 2; }

    double cost(int i, int j) const { return cost_[at(i, j)]; }   // J/kg
    double dist(int i, int j) const { return dist_[at(i, j)]; }   // m

    void set(int i, int j, double dist_m, double cost_j_per_kg) {
        dist_[at(i, j)] = dist_m;
        cost_[at(i, j)] = cost_j_per_kg;
    }

  private:
    size_t at(int i, int j) const {
        if (i < 0 || j <= i || j >= nodes_)
            throw std::out_of_range("EnergyMatrix: arc requires 0 <= i < j <= n+1");
        return static_cast<size_t>(i) * nodes_ + j;
    }

    int nodes_ = 0;
    std::vector<double> cost_;
    std::vector<double> dist_;
};

inline EnergyMatrix energy_matrix(const Instance& inst) {
    const int n = inst.station_count();
    EnergyMatrix em(n + 2);
    auto node_pos = [&inst](int k) { return k == 0 ? 0.0 : inst.stations[k - 1].position_m; };
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n + 1; ++j) {
            const double d = (j == n + 1) ? inst.loop_length_m - node_pos(i)
                                          : node_pos(j) - node_pos(i);
            em.set(i, j, d, leg_energy_per_mass(d, inst.vehicle, inst.physics));
        }
    }
    return em;
}

} // namespace massflow
