#ifndef WIGNER_COMMANDS_HPP
#define WIGNER_COMMANDS_HPP

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wigner/analysis.hpp"
#include "wigner/config.hpp"
#include "wigner/error.hpp"
#include "wigner/fd_solvers.hpp"
#include "wigner/properties.hpp"
#include "wigner/propagator.hpp"

namespace wigner::cli {

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failed_check = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_solver = 3;
inline constexpr int exit_io = 4;

/// Command-line flags that take precedence over the config file.
struct Overrides {
    std::optional<std::filesystem::path> out_dir;
    std::optional<double> tol;
};

namespace detail {

inline RunConfig load(const std::filesystem::path& path, const Overrides& overrides)
{
    RunConfig cfg = load_config(path);
    if (overrides.out_dir) cfg.output_dir = *overrides.out_dir;
    if (overrides.tol) {
        if (!(*overrides.tol > 0.0 && *overrides.tol <= 1e-6)) throw ConfigError("rel_tol", "--tol must lie in (0, 1e-6]");
        cfg.rel_tol = *overrides.tol;
    }
    return cfg;
}

inline void ensure_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory (" + ec.message() + ")", dir.string());
}

inline DiscreteSolution run(const WignerSystem& sys, Method method, double rel_tol)
{
    const auto scheme = scheme_of(method);
    return scheme ? solve_bvp(sys, *scheme, rel_tol) : solve_bvp_shooting(sys);
}

/// Maps library exceptions onto exit codes with a one-line message.
template <typename Body>
int guarded(std::ostream& err, Body&& body)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        fmt::print(err, "config error: {}\n", e.what());
        return exit_config;
    } catch (const InvalidArgument& e) {
        fmt::print(err, "invalid input: {}\n", e.what());
        return exit_config;
    } catch (const SolverFailure& e) {
        fmt::print(err, "solver failure: {} (achieved {:.3e})\n", e.what(), e.achieved());
        return exit_solver;
    } catch (const IoError& e) {
        fmt::print(err, "i/o error: {}\n", e.what());
        return exit_io;
    }
}

}  // namespace detail

/// One solve; writes the CSV files selected by `emit` and prints the
/// symmetry error, residual and runtime.
inline int cmd_solve(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
                     std::ostream& err)
{
    return detail::guarded(err, [&] {
        const RunConfig cfg = detail::load(config_path, overrides);
        const WignerSystem sys = cfg.build_system();

        const auto start = std::chrono::steady_clock::now();
        const DiscreteSolution sol = detail::run(sys, cfg.method, cfg.rel_tol);
        const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double esym = symmetry_error(sol);

        detail::ensure_dir(cfg.output_dir);
        if (cfg.emit.count(Emit::solution)) write_csv(sol, cfg.output_dir / "solution.csv");
        if (cfg.emit.count(Emit::density)) write_csv(sys.mesh, density(sol), cfg.output_dir / "density.csv");
        if (cfg.emit.count(Emit::current)) write_csv(sys.mesh, current(sol), cfg.output_dir / "current.csv");
        if (cfg.emit.count(Emit::report)) {
            StudyReport report{{{cfg.method, sys.mesh.cells(), esym, runtime, sol.residual, std::nullopt}}, sys};
            write_csv(report, cfg.output_dir / "report.csv");
        }

        fmt::print(out, "scheme          {}\n", to_string(cfg.method));
        fmt::print(out, "Nx              {}\n", sys.mesh.cells());
        fmt::print(out, "symmetry_error  {:.6e}\n", esym);
        fmt::print(out, "residual        {:.3e}\n", sol.residual);
        fmt::print(out, "runtime_s       {:.3f}\n", runtime);
        return exit_ok;
    });
}

/// Refinement study over `cells` for every method in `methods` (the config's
/// scheme when empty). Writes study.csv.
inline int cmd_study(const std::filesystem::path& config_path, const std::vector<int>& cells,
                     const std::vector<Method>& methods, const Overrides& overrides, std::ostream& out,
                     std::ostream& err)
{
    if (cells.empty()) {
        fmt::print(err, "usage: study <config> --nx <list> [--schemes <list>]\nstudy: the Nx list is empty\n");
        return exit_config;
    }
    return detail::guarded(err, [&] {
        const RunConfig cfg = detail::load(config_path, overrides);
        const WignerSystem sys = cfg.build_system();
        const std::vector<Method> chosen = methods.empty() ? std::vector<Method>{cfg.method} : methods;

        StudyReport combined{{}, sys};
        fmt::print(out, "{:<8} {:>7} {:>24} {:>10} {:>10}\n", "scheme", "Nx", "symmetry_error", "runtime_s", "residual");
        for (Method m : chosen) {
            const StudyReport report = convergence_study(sys, m, cells, cfg.rel_tol);
            for (const auto& row : report.rows) {
                fmt::print(out, "{:<8} {:>7} {:>24.17g} {:>10.3f} {:>10.2e}{}\n", to_string(row.method), row.cells,
                           row.symmetry_error, row.runtime_seconds, row.residual,
                           row.failure ? "  FAILED: " + *row.failure : std::string());
                combined.rows.push_back(row);
            }
        }
        detail::ensure_dir(cfg.output_dir);
        write_csv(combined, cfg.output_dir / "study.csv");
        return exit_ok;
    });
}

/// Runs the property suite on the configured system. Exit 0 iff all pass.
inline int cmd_verify(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
                      std::ostream& err)
{
    return detail::guarded(err, [&] {
        const RunConfig cfg = detail::load(config_path, overrides);
        const WignerSystem sys = cfg.build_system();
        bool all = true;
        for (const auto& r : run_property_suite(sys)) {
            fmt::print(out, "[{}] {:<40} measured {:.3e} (threshold {:.1e})\n", r.passed ? "PASS" : "FAIL", r.name,
                       r.measured, r.threshold);
            all = all && r.passed;
        }
        return all ? exit_ok : exit_failed_check;
    });
}

}  // namespace wigner::cli

#endif  // WIGNER_COMMANDS_HPP
