// Command-line front end: solve, compare, export, validate, gen.

#include <iostream>

#include "CLI11.hpp"
#include "massflow/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"energy-optimal supplying strategies for a fixed-route assembly line"};
    app.require_subcommand(1);

    massflow::cli::SolveOptions solve_opt;
    auto* solve = app.add_subcommand("solve", "solve one instance to proven optimality");
    solve->add_option("--instance", solve_opt.instance_path, "instance JSON file")
        ->required();
    solve->add_option("--objective", solve_opt.objective, "energy|distance (default energy)")
        ->check(CLI::IsMember({"energy", "distance"}));
    solve->add_option("--method", solve_opt.method, "bb|oracle (default bb)")
        ->check(CLI::IsMember({"bb", "oracle"}));
    solve->add_option("--time-limit", solve_opt.time_limit_s, "wall-clock limit in seconds");
    solve->add_option("--node-limit", solve_opt.node_limit, "branch-and-bound node limit");
    solve->add_option("--out", solve_opt.out_path, "solution file (default <instance>.sol.json)");

    massflow::cli::CompareOptions cmp_opt;
    auto* cmp = app.add_subcommand(
        "compare", "solve under both objectives and re-price both with the energy metric");
    cmp->add_option("--instance", cmp_opt.instance_path, "instance JSON file")->required();
    cmp->add_option("--time-limit", cmp_opt.time_limit_s, "wall-clock limit per solve");
    cmp->add_option("--node-limit", cmp_opt.node_limit, "node limit per solve");

    massflow::cli::ExportOptions exp_opt;
    auto* exp = app.add_subcommand("export", "write the model or the energy matrix");
    exp->add_option("--instance", exp_opt.instance_path, "instance JSON file")->required();
    exp->add_option("--format", exp_opt.format, "mps|lp|energy-csv")
        ->check(CLI::IsMember({"mps", "lp", "energy-csv"}));
    exp->add_option("--objective", exp_opt.objective, "objective for mps/lp exports")
        ->check(CLI::IsMember({"energy", "distance"}));
    exp->add_option("--out", exp_opt.out_path, "output file (default stdout)");

    massflow::cli::ValidateOptions val_opt;
    auto* val = app.add_subcommand("validate", "check a solution file against an instance");
    val->add_option("--instance", val_opt.instance_path, "instance JSON file")->required();
    val->add_option("--solution", val_opt.solution_path, "solution JSON file")->required();

    massflow::cli::GenOptions gen_opt;
    auto* gen = app.add_subcommand("gen", "generate a random valid instance");
    gen->add_option("--seed", gen_opt.seed, "RNG seed");
    gen->add_option("--stations", gen_opt.stations, "number of stations");
    gen->add_option("--periods", gen_opt.periods, "number of periods");
    gen->add_option("--profile", gen_opt.profile, "uniform|periodic")
        ->check(CLI::IsMember({"uniform", "periodic"}));
    gen->add_option("--out", gen_opt.out_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return massflow::cli::cmd_solve(solve_opt, std::cout, std::cerr);
    if (cmp->parsed()) return massflow::cli::cmd_compare(cmp_opt, std::cout, std::cerr);
    if (exp->parsed()) return massflow::cli::cmd_export(exp_opt, std::cout, std::cerr);
    if (val->parsed()) return massflow::cli::cmd_validate(val_opt, std::cout, std::cerr);
    if (gen->parsed()) return massflow::cli::cmd_gen(gen_opt, std::cout, std::cerr);
    return 1;
}
