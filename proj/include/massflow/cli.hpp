#pragma once

// Command implementations behind the massflow binary. Each cmd_* takes an
// options struct and the two output streams and returns the process exit
// code: 0 success/optimal, 1 usage or data errors, 2 limit reached with or
// without an incumbent, 3 infeasible.
//
// MASSFLOW_LOG=quiet|info|debug controls what lands on stderr.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "massflow/branch_bound.hpp"
#include "massflow/instance.hpp"
#include "massflow/model_io.hpp"
#include "massflow/oracle.hpp"
#include "massflow/solution_io.hpp"
#include "massflow/validate.hpp"

namespace massflow::cli {

enum class LogLevel { Quiet, Info, Debug };

inline LogLevel log_level_from_env() {
    const char* v = std::getenv("MASSFLOW_LOG");
    if (!v) return LogLevel::Info;
    const std::string s = v;
    if (s == "quiet") return LogLevel::Quiet;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

inline std::string default_solution_path(const std::string& instance_path) {
    std::string base = instance_path;
    if (base.size() > 5 && base.substr(base.size() - 5) == ".json")
        base.resize(base.size() - 5);
    return base + ".sol.json";
}

namespace detail {

inline int load_checked(const std::string& path, Instance& inst, std::ostream& err) {
    inst = parse_instance(read_file(path));
    const auto violations = validate_instance(inst);
    if (!violations.empty()) {
        err << "instance validation failed:\n";
        for (const auto& v : violations) err << "  " << v << "\n";
        return 1;
    }
    return 0;
}

inline int tour_count(const Solution& s) {
    int k = 0;
    for (double y : s.tour)
        if (y > 0.5) ++k;
    return k;
}

inline void print_tour_lines(std::ostream& out, const Solution& s) {
    for (int t = 1; t <= s.nt; ++t) {
        if (s.tour[t - 1] <= 0.5) continue;
        out << "  period " << t << ": stops [";
        bool first = true;
        for (int i = 1; i <= s.n; ++i)
            if (s.stop[i - 1][t - 1] > 0.5) {
                out << (first ? "" : " ") << i;
                first = false;
            }
        out << "]\n";
    }
}

} // namespace detail

struct SolveOptions {
    std::string instance_path;
    std::string objective = "energy";
    std::string method = "bb";
    double time_limit_s = 600.0;
    long node_limit = 1000000;
    std::string out_path; // empty: derived from the instance path
};

inline int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        Instance inst;
        if (int rc = detail::load_checked(opt.instance_path, inst, err)) return rc;
        if (opt.objective != "energy" && opt.objective != "distance") {
            err << "unknown objective '" << opt.objective << "'\n";
            return 1;
        }
        const ObjectiveKind kind = objective_kind_from(opt.objective);
        const EnergyMatrix em = energy_matrix(inst);
        const LogLevel level = log_level_from_env();

        std::optional<Solution> sol;
        SolveStats stats;
        if (opt.method == "oracle") {
            try {
                OracleResult res = enumerate_optimal(inst, em, kind);
                sol = plan_to_solution(inst, em, res.plan, kind);
                stats.status = SolveStatus::Optimal;
                stats.best_incumbent = stats.best_bound = res.objective;
                stats.nodes_explored = 1;
            } catch (const std::runtime_error& e) {
                err << e.what() << "\n";
                return 3; // no feasible plan
            }
        } else if (opt.method == "bb") {
            const MilpModel model = build_model(inst, em, kind);
            SolveLimits limits;
            limits.time_limit_s = opt.time_limit_s;
            limits.node_limit = opt.node_limit;
            BranchHooks hooks;
            if (level != LogLevel::Quiet) hooks.log = &err;
            BbResult res = solve_bb(model, limits, hooks);
            stats = res.stats;
            sol = std::move(res.solution);
        } else {
            err << "unknown method '" << opt.method << "'\n";
            return 1;
        }

        int code = 0;
        switch (stats.status) {
            case SolveStatus::Optimal: code = 0; break;
            case SolveStatus::Feasible:
            case SolveStatus::Limit: code = 2; break;
            case SolveStatus::Infeasible: code = 3; break;
        }

        double objective_value = 0.0;
        std::string written;
        if (sol) {
            const auto violations = check_feasibility(inst, *sol);
            if (!violations.empty()) {
                err << "internal error: solver returned an infeasible solution\n";
                for (const auto& v : violations)
                    err << family_name(v.family) << "\t" << v.i << "\t" << v.j << "\t" << v.t
                        << "\t" << v.magnitude << "\n";
                return 1;
            }
            objective_value = recompute_objective(inst, em, *sol, kind);
            sol->objective_value = objective_value;
            written = opt.out_path.empty() ? default_solution_path(opt.instance_path)
                                           : opt.out_path;
            write_file(written, write_solution_json(*sol, kind));
        }

        out << "instance: " << opt.instance_path << " (n=" << inst.station_count()
            << ", nt=" << inst.nt << ")\n";
        out << "objective: " << opt.objective << "\n";
        out << "method: " << opt.method << "\n";
        out << "status: " << to_string(stats.status) << "\n";
        if (sol) {
            out << "objective_value: " << massflow::detail::fmt_num(objective_value)
                << (kind == ObjectiveKind::Energy ? " J" : " m") << "\n";
            out << "tours: " << detail::tour_count(*sol) << "\n";
            detail::print_tour_lines(out, *sol);
            out << "solution written to " << written << "\n";
        }
        out << "---\n";
        out << "n=" << inst.station_count() << "\n";
        out << "nt=" << inst.nt << "\n";
        out << "objective_kind=" << opt.objective << "\n";
        out << "method=" << opt.method << "\n";
        out << "status=" << to_string(stats.status) << "\n";
        if (sol) out << "objective_value=" << massflow::detail::fmt_num(objective_value) << "\n";
        out << "tours=" << (sol ? detail::tour_count(*sol) : 0) << "\n";
        out << "nodes=" << stats.nodes_explored << "\n";
        out << "lp_iterations=" << stats.lp_iterations << "\n";
        out << "best_bound=" << massflow::detail::fmt_num(stats.best_bound) << "\n";
        out << "wall_time_s=" << massflow::detail::fmt_num(stats.wall_time_s) << "\n";
        if (sol) out << "solution_file=" << written << "\n";
        return code;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 1;
    }
}

struct CompareOptions {
    std::string instance_path;
    double time_limit_s = 600.0;
    long node_limit = 1000000;
};

// Solves the same instance under both objectives and re-prices both optima
// with the energy metric.
inline int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        Instance inst;
        if (int rc = detail::load_checked(opt.instance_path, inst, err)) return rc;
        const EnergyMatrix em = energy_matrix(inst);
        const LogLevel level = log_level_from_env();
        SolveLimits limits;
        limits.time_limit_s = opt.time_limit_s;
        limits.node_limit = opt.node_limit;
        BranchHooks hooks;
        if (level == LogLevel::Debug) hooks.log = &err;

        struct Run {
            ObjectiveKind kind;
            BbResult res;
        };
        Run runs[2] = {{ObjectiveKind::Energy, {}}, {ObjectiveKind::Distance, {}}};
        for (Run& r : runs) {
            const MilpModel model = build_model(inst, em, r.kind);
            r.res = solve_bb(model, limits, hooks);
            if (r.res.stats.status == SolveStatus::Infeasible) {
                err << "instance is infeasible\n";
                return 3;
            }
            if (!r.res.solution) {
                err << "limit reached before any incumbent under "
                    << objective_kind_name(r.kind) << " objective\n";
                return 2;
            }
        }
        const Solution& sol_e = *runs[0].res.solution;
        const Solution& sol_d = *runs[1].res.solution;
        const double energy_e = recompute_objective(inst, em, sol_e, ObjectiveKind::Energy);
        const double energy_d = recompute_objective(inst, em, sol_d, ObjectiveKind::Energy);
        const double dist_d = recompute_objective(inst, em, sol_d, ObjectiveKind::Distance);
        const double ratio = energy_e == 0.0 ? (energy_d == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                                             : energy_d / energy_e;

        out << "instance: " << opt.instance_path << " (n=" << inst.station_count()
            << ", nt=" << inst.nt << ")\n";
        out << "energy-optimal run:   " << massflow::detail::fmt_num(energy_e) << " J in "
            << detail::tour_count(sol_e) << " tour(s)\n";
        detail::print_tour_lines(out, sol_e);
        out << "distance-optimal run: " << massflow::detail::fmt_num(dist_d) << " m, costing "
            << massflow::detail::fmt_num(energy_d) << " J in " << detail::tour_count(sol_d)
            << " tour(s)\n";
        detail::print_tour_lines(out, sol_d);
        out << "energy(distance-optimal) / energy(energy-optimal) = "
            << massflow::detail::fmt_num(ratio) << "\n";
        out << "---\n";
        out << "energy_run_energy=" << massflow::detail::fmt_num(energy_e) << "\n";
        out << "distance_run_energy=" << massflow::detail::fmt_num(energy_d) << "\n";
        out << "distance_run_distance=" << massflow::detail::fmt_num(dist_d) << "\n";
        out << "energy_ratio=" << massflow::detail::fmt_num(ratio) << "\n";
        out << "energy_run_tours=" << detail::tour_count(sol_e) << "\n";
        out << "distance_run_tours=" << detail::tour_count(sol_d) << "\n";
        const bool both_optimal = runs[0].res.stats.status == SolveStatus::Optimal &&
                                  runs[1].res.stats.status == SolveStatus::Optimal;
        out << "both_optimal=" << (both_optimal ? 1 : 0) << "\n";
        return both_optimal ? 0 : 2;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 1;
    }
}

struct ExportOptions {
    std::string instance_path;
    std::string format = "mps"; // mps | lp | energy-csv
    std::string objective = "energy";
    std::string out_path; // empty: stdout
};

inline int cmd_export(const ExportOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        Instance inst;
        if (int rc = detail::load_checked(opt.instance_path, inst, err)) return rc;
        const EnergyMatrix em = energy_matrix(inst);
        std::string payload;
        if (opt.format == "energy-csv") {
            payload = export_energy_csv(em);
        } else if (opt.format == "mps" || opt.format == "lp") {
            const MilpModel model = build_model(inst, em, objective_kind_from(opt.objective));
            payload = opt.format == "mps" ? export_mps(model) : export_lp(model);
        } else {
            err << "unknown format '" << opt.format << "'\n";
            return 1;
        }
        if (opt.out_path.empty()) out << payload;
        else write_file(opt.out_path, payload);
        return 0;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 1;
    }
}

struct ValidateOptions {
    std::string instance_path;
    std::string solution_path;
};

inline int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        Instance inst;
        if (int rc = detail::load_checked(opt.instance_path, inst, err)) return rc;
        auto [sol, kind] = read_solution_json(read_file(opt.solution_path));
        const auto violations = check_feasibility(inst, sol);
        if (violations.empty()) {
            out << "solution feasible\n";
            return 0;
        }
        for (const auto& v : violations)
            out << family_name(v.family) << "\t" << v.i << "\t" << v.j << "\t" << v.t << "\t"
                << massflow::detail::fmt_num(v.magnitude) << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 1;
    }
}

struct GenOptions {
    std::uint64_t seed = 1;
    int stations = 3;
    int periods = 2;
    std::string profile = "uniform";
    std::string out_path; // empty: stdout
};

inline int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        const Instance inst = generate_instance(opt.seed, opt.stations, opt.periods, opt.profile);
        const std::string text = render_instance(inst);
        if (opt.out_path.empty()) out << text;
        else write_file(opt.out_path, text);
        return 0;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 1;
    }
}

} // namespace massflow::cli
