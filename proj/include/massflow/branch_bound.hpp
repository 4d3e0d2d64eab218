#pragma once

// Branch and bound over the LP relaxation. Branching variable: most
// fractional integer column, ties to the lowest index. Node selection: best
// bound, ties to the deeper node, then to creation order. Children reuse the
// parent's optimal basis as a warm start. Single-threaded and deterministic:
// the same model and limits always produce the same tree, stats and solution.

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <vector>

#include "massflow/simplex.hpp"

namespace massflow {

struct SolveLimits {
    double time_limit_s = 600.0;
    long node_limit = 1000000;
    double gap_tolerance = 1e-6; // relative
    double integrality_tolerance = 1e-6;
    double lp_feasibility_tolerance = 1e-7;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Limit };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Limit: return "limit";
    }
    return "?";
}

struct SolveStats {
    long nodes_explored = 0;
    long lp_iterations = 0;
    double best_bound = -std::numeric_limits<double>::infinity();
    double best_incumbent = std::numeric_limits<double>::infinity();
    SolveStatus status = SolveStatus::Limit;
    double wall_time_s = 0.0;
};

struct BranchHooks {
    // Called for every child LP with (parent relaxation value, child value);
    // child must never undercut the parent beyond round-off.
    std::function<void(double, double)> bound_check;
    std::ostream* log = nullptr; // progress line every 1000 nodes
};

struct BbResult {
    std::optional<Solution> solution;
    SolveStats stats;
};

namespace detail {

struct BbNode {
    int parent = -1;
    int col = -1;        // branching column (unset for the root)
    bool is_upper = false;
    double value = 0.0;  // new bound for col
    int depth = 0;
    double bound = -std::numeric_limits<double>::infinity(); // parent LP value
    Basis basis;         // parent's optimal basis, cleared after expansion
};

struct QueueEntry {
    double bound;
    int depth;
    long id;
};

struct QueueOrder {
    // priority_queue keeps the "largest"; make the best node largest.
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.id > b.id;
    }
};

} // namespace detail

inline BbResult solve_bb(const MilpModel& model, const SolveLimits& limits = {},
                         const BranchHooks& hooks = {}) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto elapsed = [&t0] {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    SimplexOptions lp_opts;
    lp_opts.feas_tol = limits.lp_feasibility_tolerance;
    LpSolver lp(model, lp_opts);

    BbResult out;
    SolveStats& stats = out.stats;

    std::vector<int> int_cols;
    for (int c = 0; c < model.var_count(); ++c)
        if (model.vars[c].kind != VarKind::Continuous) int_cols.push_back(c);

    std::vector<detail::BbNode> arena;
    std::priority_queue<detail::QueueEntry, std::vector<detail::QueueEntry>, detail::QueueOrder>
        open;
    arena.push_back(detail::BbNode{}); // root
    open.push({arena[0].bound, 0, 0});

    std::vector<double> best_x;
    bool have_incumbent = false;
    auto inc_slack = [&] {
        return limits.gap_tolerance * std::max(1.0, std::abs(stats.best_incumbent));
    };

    std::vector<double> lb(model.var_count()), ub(model.var_count());
    auto materialize_bounds = [&](int node_id) {
        for (int c = 0; c < model.var_count(); ++c) {
            lb[c] = model.vars[c].lower;
            ub[c] = model.vars[c].upper;
        }
        std::vector<int> chain;
        for (int k = node_id; k > 0; k = arena[k].parent) chain.push_back(k);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const detail::BbNode& nd = arena[*it];
            if (nd.is_upper) ub[nd.col] = nd.value;
            else lb[nd.col] = nd.value;
        }
    };

    auto recomputed_objective = [&](const std::vector<double>& x) {
        double v = 0.0;
        for (int c = 0; c < model.var_count(); ++c) v += model.obj[c] * x[c];
        return v;
    };

    SolveStatus stop_status = SolveStatus::Limit;
    bool stopped = false;

    while (!open.empty()) {
        if (elapsed() > limits.time_limit_s || stats.nodes_explored >= limits.node_limit) {
            stopped = true;
            break;
        }
        const detail::QueueEntry top = open.top();
        open.pop();
        detail::BbNode& node = arena[top.id];

        if (have_incumbent && top.bound >= stats.best_incumbent - inc_slack()) continue;

        materialize_bounds(static_cast<int>(top.id));
        const Basis* warm = node.basis.cols.empty() ? nullptr : &node.basis;
        LpResult res = lp.solve(lb, ub, warm);
        ++stats.nodes_explored;
        stats.lp_iterations += res.iterations;

        if (hooks.log && stats.nodes_explored % 1000 == 0) {
            const double bound = open.empty() ? res.objective
                                              : std::min(res.objective, open.top().bound);
            *hooks.log << "[bb] nodes=" << stats.nodes_explored << " open=" << open.size()
                       << " bound=" << bound << " incumbent="
                       << (have_incumbent ? std::to_string(stats.best_incumbent)
                                          : std::string("-"))
                       << "\n";
        }

        if (res.status == LpStatus::Infeasible) {
            node.basis.cols.clear();
            continue;
        }
        if (res.status != LpStatus::Optimal)
            throw std::runtime_error("solve_bb: LP relaxation failed (numerical breakdown)");
        if (hooks.bound_check && top.id != 0) hooks.bound_check(node.bound, res.objective);
        node.basis.cols.clear();

        if (have_incumbent && res.objective >= stats.best_incumbent - inc_slack()) continue;

        // Most fractional integer variable.
        int branch_col = -1;
        double branch_frac = limits.integrality_tolerance;
        for (int c : int_cols) {
            const double v = res.x[c];
            const double dist = std::abs(v - std::round(v));
            if (dist > branch_frac) {
                branch_frac = dist;
                branch_col = c;
            }
        }

        if (branch_col < 0) {
            // Integral: snap the integer variables and re-solve the continuous
            // part so the stored incumbent is exactly consistent.
            std::vector<double> flb(lb), fub(ub);
            for (int c : int_cols) {
                const double r = std::round(res.x[c]);
                flb[c] = r;
                fub[c] = r;
            }
            LpResult fixed = lp.solve(flb, fub, &res.basis);
            stats.lp_iterations += fixed.iterations;
            const std::vector<double>& xs =
                fixed.status == LpStatus::Optimal ? fixed.x : res.x;
            if (fixed.status != LpStatus::Optimal && hooks.log)
                *hooks.log << "[bb] warning: incumbent cleanup re-solve failed; "
                              "keeping raw relaxation values\n";
            const double objv = recomputed_objective(xs);
            if (!have_incumbent || objv < stats.best_incumbent) {
                stats.best_incumbent = objv;
                best_x = xs;
                have_incumbent = true;
            }
            continue;
        }

        const double v = res.x[branch_col];
        const int child_depth = node.depth + 1; // arena grows below; no refs past here
        for (int side = 0; side < 2; ++side) {
            detail::BbNode child;
            child.parent = static_cast<int>(top.id);
            child.col = branch_col;
            child.is_upper = side == 0;
            child.value = side == 0 ? std::floor(v) : std::ceil(v);
            child.depth = child_depth;
            child.bound = res.objective;
            child.basis = res.basis;
            arena.push_back(std::move(child));
            open.push({res.objective, child_depth, static_cast<long>(arena.size() - 1)});
        }

        if (have_incumbent) {
            const double global = open.empty() ? stats.best_incumbent : open.top().bound;
            if (stats.best_incumbent - global <=
                limits.gap_tolerance * std::max(1.0, std::abs(stats.best_incumbent))) {
                stats.best_bound = global;
                stop_status = SolveStatus::Optimal;
                stopped = true;
                break;
            }
        }
    }

    stats.wall_time_s = elapsed();
    if (stopped && stop_status == SolveStatus::Optimal) {
        stats.status = SolveStatus::Optimal;
    } else if (stopped) {
        stats.best_bound = open.empty() ? stats.best_incumbent : open.top().bound;
        stats.status = have_incumbent ? SolveStatus::Feasible : SolveStatus::Limit;
    } else {
        // Tree exhausted.
        stats.best_bound = stats.best_incumbent;
        stats.status = have_incumbent ? SolveStatus::Optimal : SolveStatus::Infeasible;
    }
    if (have_incumbent) out.solution = extract_solution(model, best_x);
    return out;
}

} // namespace massflow
