#ifndef WIGNER_ANALYSIS_HPP
#define WIGNER_ANALYSIS_HPP

#include <Eigen/Core>
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wigner/error.hpp"
#include "wigner/fd_solvers.hpp"
#include "wigner/propagator.hpp"

namespace wigner {

/// n(x_j) = sum_i f_{i,j}.
inline Eigen::VectorXd density(const DiscreteSolution& sol) { return sol.values.colwise().sum().transpose(); }

/// J(x_j) = sum_i v_i f_{i,j}.
inline Eigen::VectorXd current(const DiscreteSolution& sol)
{
    return sol.values.transpose() * sol.system.grid.velocities();
}

/// max_j |J(x_j) - J(x_0)| / |J(x_0)|.
inline double current_drift(const DiscreteSolution& sol)
{
    const Eigen::VectorXd j = current(sol);
    return (j.array() - j[0]).abs().maxCoeff() / std::max(std::abs(j[0]), 1e-300);
}

/// sum_i sum_{j=0..Nx} |f_{i,j} - f_{i,Nx-j}| dx. Every node carries the
/// full weight dx, endpoints included.
inline double symmetry_error(const DiscreteSolution& sol)
{
    const auto& f = sol.values;
    const Eigen::Index last = f.cols() - 1;
    double sum = 0.0;
    for (Eigen::Index j = 0; j <= last; ++j) sum += (f.col(j) - f.col(last - j)).cwiseAbs().sum();
    return sum * sol.system.mesh.dx();
}

/// Discrete L1 distance sum |a - b| dx on the nodes shared by both meshes.
/// The finer mesh must refine the coarser one by an integer factor.
inline double scheme_difference(const DiscreteSolution& a, const DiscreteSolution& b)
{
    if (!(a.system.potential == b.system.potential) || !(a.system.grid == b.system.grid) ||
        a.system.boundary.values() != b.system.boundary.values() ||
        a.system.mesh.length() != b.system.mesh.length())
        throw InvalidArgument("scheme_difference: solutions belong to different systems");
    const bool a_coarse = a.system.mesh.cells() <= b.system.mesh.cells();
    const DiscreteSolution& coarse = a_coarse ? a : b;
    const DiscreteSolution& fine = a_coarse ? b : a;
    const int nc = coarse.system.mesh.cells(), nf = fine.system.mesh.cells();
    if (nf % nc != 0)
        throw InvalidArgument(fmt::format("scheme_difference: meshes with {} and {} cells do not nest", nc, nf));
    const int ratio = nf / nc;
    double sum = 0.0;
    for (Eigen::Index j = 0; j <= nc; ++j)
        sum += (coarse.values.col(j) - fine.values.col(j * ratio)).cwiseAbs().sum();
    return sum * coarse.system.mesh.dx();
}

struct StudyRow {
    Method method;
    int cells;
    double symmetry_error;
    double runtime_seconds;
    double residual;
    std::optional<std::string> failure;
};

struct StudyReport {
    std::vector<StudyRow> rows;
    WignerSystem system;
};

/// Solve `system` on each mesh in `cells` and record the symmetry error.
/// Solver failures are recorded in the row instead of aborting the study.
inline StudyReport convergence_study(const WignerSystem& system, Method method, const std::vector<int>& cells,
                                     double rel_tol = default_rel_tol, const PropagatorOptions& opts = {})
{
    if (cells.empty()) throw InvalidArgument("convergence_study: empty Nx list");
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (cells[k] < 2 || cells[k] % 2 != 0)
            throw InvalidArgument(fmt::format("convergence_study: Nx = {} is not an even integer >= 2", cells[k]));
        if (k > 0 && cells[k] <= cells[k - 1])
            throw InvalidArgument("convergence_study: Nx list must be strictly increasing");
    }

    StudyReport report{{}, system};
    for (int nx : cells) {
        const WignerSystem refined = system.with_cells(nx);
        const auto start = std::chrono::steady_clock::now();
        try {
            const auto scheme = scheme_of(method);
            const DiscreteSolution sol =
                scheme ? solve_bvp(refined, *scheme, rel_tol) : solve_bvp_shooting(refined, opts);
            const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            report.rows.push_back({method, nx, symmetry_error(sol), elapsed, sol.residual, std::nullopt});
        } catch (const SolverFailure& e) {
            const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            report.rows.push_back({method, nx, std::numeric_limits<double>::quiet_NaN(), elapsed, e.achieved(),
                                   std::string(e.what())});
        }
    }
    return report;
}

// CSV output. Columns are separated by ", " and reals carry 17 significant
// digits, which round-trips every double.

namespace detail {

inline std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing", path.string());
    return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) throw IoError("write failed", path.string());
}

}  // namespace detail

inline std::string format_real(double x) { return fmt::format("{:.17g}", x); }

/// Header `x, v, f`, one row per (node, velocity) pair, node-major.
inline void write_csv(const DiscreteSolution& sol, const std::filesystem::path& path)
{
    auto out = detail::open_for_write(path);
    const auto& grid = sol.system.grid;
    const auto& mesh = sol.system.mesh;
    out << "x, v, f\n";
    for (Eigen::Index j = 0; j < mesh.nodes(); ++j)
        for (Eigen::Index p = 0; p < grid.size(); ++p)
            out << fmt::format("{:.17g}, {:.17g}, {:.17g}\n", mesh.node(j), grid.velocity(p), sol.values(p, j));
    detail::finish(out, path);
}

/// Header `scheme, Nx, symmetry_error, runtime_s, residual`.
inline void write_csv(const StudyReport& report, const std::filesystem::path& path)
{
    auto out = detail::open_for_write(path);
    out << "scheme, Nx, symmetry_error, runtime_s, residual\n";
    for (const auto& row : report.rows)
        out << fmt::format("{}, {}, {:.17g}, {:.17g}, {:.17g}\n", to_string(row.method), row.cells,
                           row.symmetry_error, row.runtime_seconds, row.residual);
    detail::finish(out, path);
}

/// Header `x, value` for a node-indexed profile such as density or current.
inline void write_csv(const SpatialMesh& mesh, const Eigen::VectorXd& values, const std::filesystem::path& path)
{
    if (values.size() != mesh.nodes()) throw InvalidArgument("write_csv: profile length does not match the mesh");
    auto out = detail::open_for_write(path);
    out << "x, value\n";
    for (Eigen::Index j = 0; j < mesh.nodes(); ++j)
        out << fmt::format("{:.17g}, {:.17g}\n", mesh.node(j), values[j]);
    detail::finish(out, path);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    double number(std::size_t row, std::size_t col) const { return std::stod(rows.at(row).at(col)); }
};

inline CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for reading", path.string());
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::size_t begin = 0;
        for (;;) {
            const auto end = line.find(',', begin);
            std::string cell = line.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
            const auto first = cell.find_first_not_of(' ');
            cells.push_back(first == std::string::npos ? std::string() : cell.substr(first));
            if (end == std::string::npos) break;
            begin = end + 1;
        }
        return cells;
    };
    CsvTable table;
    std::string line;
    if (std::getline(in, line)) table.header = split(line);
    while (std::getline(in, line))
        if (!line.empty()) table.rows.push_back(split(line));
    return table;
}

}  // namespace wigner

#endif  // WIGNER_ANALYSIS_HPP
