// Command-line front end: solve, study and verify.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "wigner/commands.hpp"

namespace {

std::vector<wigner::Method> parse_methods(const std::vector<std::string>& names)
{
    std::vector<wigner::Method> methods;
    for (const auto& name : names) {
        const auto m = wigner::parse_method(name);
        if (!m) throw CLI::ValidationError("--schemes", "unknown scheme '" + name + "'");
        methods.push_back(*m);
    }
    return methods;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete-velocity stationary Wigner solver"};
    app.require_subcommand(1);

    std::string config;
    wigner::cli::Overrides overrides;
    std::string out_dir;
    double tol = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config, "Run configuration file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");
        cmd->add_option("--tol", tol, "Linear solver relative tolerance (overrides rel_tol)");
    };

    auto* solve = app.add_subcommand("solve", "Solve one boundary value problem");
    add_common(solve);

    std::vector<int> cells;
    std::vector<std::string> schemes;
    auto* study = app.add_subcommand("study", "Mesh refinement study of the symmetry error");
    add_common(study);
    study->add_option("--nx", cells, "Mesh cell counts, e.g. 100,400,1600")->delimiter(',');
    study->add_option("--schemes", schemes, "upwind1, upwind2, central, oracle")->delimiter(',');

    auto* verify = app.add_subcommand("verify", "Run the property checks");
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (!out_dir.empty()) overrides.out_dir = out_dir;
    if (tol != 0.0) overrides.tol = tol;

    if (solve->parsed()) return wigner::cli::cmd_solve(config, overrides, std::cout, std::cerr);
    if (verify->parsed()) return wigner::cli::cmd_verify(config, overrides, std::cout, std::cerr);
    std::vector<wigner::Method> methods;
    try {
        methods = parse_methods(schemes);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    return wigner::cli::cmd_study(config, cells, methods, overrides, std::cout, std::cerr);
}
