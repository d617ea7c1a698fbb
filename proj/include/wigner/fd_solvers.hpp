#ifndef WIGNER_FD_SOLVERS_HPP
#define WIGNER_FD_SOLVERS_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wigner/block_tridiagonal.hpp"
#include "wigner/error.hpp"
#include "wigner/kinetic_system.hpp"

namespace wigner {

enum class Scheme { upwind1, upwind2, central };

/// How a DiscreteSolution was produced: one of the difference schemes or the
/// propagator-based shooting solver.
enum class Method { upwind1, upwind2, central, oracle };

constexpr Method method_of(Scheme s) noexcept
{
    switch (s) {
    case Scheme::upwind1: return Method::upwind1;
    case Scheme::upwind2: return Method::upwind2;
    case Scheme::central: return Method::central;
    }
    return Method::central;
}

constexpr std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::upwind1: return "upwind1";
    case Method::upwind2: return "upwind2";
    case Method::central: return "central";
    case Method::oracle: return "oracle";
    }
    return "?";
}

constexpr std::string_view to_string(Scheme s) noexcept { return to_string(method_of(s)); }

inline std::optional<Method> parse_method(std::string_view name) noexcept
{
    for (Method m : {Method::upwind1, Method::upwind2, Method::central, Method::oracle})
        if (to_string(m) == name) return m;
    return std::nullopt;
}

inline std::optional<Scheme> scheme_of(Method m) noexcept
{
    switch (m) {
    case Method::upwind1: return Scheme::upwind1;
    case Method::upwind2: return Scheme::upwind2;
    case Method::central: return Scheme::central;
    case Method::oracle: return std::nullopt;
    }
    return std::nullopt;
}

/// Grid function f_{i,j}: rows are velocity positions, columns mesh nodes.
struct DiscreteSolution {
    Eigen::MatrixXd values;
    WignerSystem system;
    Method method;
    double residual = 0.0;
};

/// Maps (velocity position, mesh node) to a global unknown. Ordering is
/// node-major, velocity-minor. Inflow-pinned entries (v > 0 at the left
/// node, v < 0 at the right node) have no unknown.
class UnknownLayout {
public:
    UnknownLayout(const VelocityGrid& grid, const SpatialMesh& mesh)
        : velocities_(grid.size()), negatives_(grid.negative_count()), cells_(mesh.cells()) {}

    static constexpr Eigen::Index pinned = -1;

    Eigen::Index size() const noexcept { return offset(cells_) + (velocities_ - negatives_); }

    /// First unknown at node j.
    Eigen::Index offset(Eigen::Index j) const noexcept
    {
        return j == 0 ? 0 : negatives_ + (j - 1) * velocities_;
    }

    Eigen::Index operator()(Eigen::Index pos, Eigen::Index j) const noexcept
    {
        if (j == 0) return pos < negatives_ ? pos : pinned;
        if (j == cells_) return pos >= negatives_ ? offset(j) + (pos - negatives_) : pinned;
        return offset(j) + pos;
    }

    Eigen::Index nodes() const noexcept { return cells_ + 1; }

private:
    Eigen::Index velocities_;
    Eigen::Index negatives_;
    Eigen::Index cells_;
};

/// Sparse linear problem over the free unknowns. Row r holds the difference
/// equation owned by unknown r.
struct LinearProblem {
    SparseRowMatrix matrix;
    Eigen::VectorXd rhs;
    UnknownLayout layout;
};

namespace detail {

struct Term {
    int offset;
    double weight;
};

/// Difference equation for one (velocity, node) pair:
///   v / dx * sum transport[k].weight * f_{i, j + transport[k].offset}
///     = sum coupling[k].weight * g_{i, j + coupling[k].offset}
struct Stencil {
    std::array<Term, 3> transport{};
    int transport_terms = 0;
    std::array<Term, 2> coupling{};
    int coupling_terms = 0;
};

inline Stencil stencil_for(Scheme scheme, bool rightward, Eigen::Index j, Eigen::Index cells)
{
    Stencil s;
    // Rightward transport marches away from the left contact, leftward from the right one.
    const int dir = rightward ? 1 : -1;
    const bool first_cell = rightward ? (j == 1) : (j == cells - 1);
    switch (scheme) {
    case Scheme::upwind1:
        s.transport = {Term{0, dir * 1.0}, Term{-dir, -dir * 1.0}};
        s.transport_terms = 2;
        s.coupling = {Term{0, 1.0}};
        s.coupling_terms = 1;
        break;
    case Scheme::upwind2:
        if (first_cell) return stencil_for(Scheme::upwind1, rightward, j, cells);
        s.transport = {Term{0, dir * 1.5}, Term{-dir, -dir * 2.0}, Term{-2 * dir, dir * 0.5}};
        s.transport_terms = 3;
        s.coupling = {Term{0, 1.0}};
        s.coupling_terms = 1;
        break;
    case Scheme::central:
        s.transport = {Term{0, dir * 1.0}, Term{-dir, -dir * 1.0}};
        s.transport_terms = 2;
        s.coupling = {Term{0, 0.5}, Term{-dir, 0.5}};
        s.coupling_terms = 2;
        break;
    }
    return s;
}

inline int stencil_reach(Scheme scheme) noexcept { return scheme == Scheme::upwind2 ? 2 : 1; }

}  // namespace detail

/// Assemble the global difference system for `scheme`. Pinned inflow values
/// are moved to the right-hand side.
inline LinearProblem assemble(const WignerSystem& system, Scheme scheme)
{
    const auto& grid = system.grid;
    const auto& mesh = system.mesh;
    const auto& fb = system.boundary.values();
    const UnknownLayout layout(grid, mesh);
    const Eigen::Index velocities = grid.size();
    const Eigen::Index cells = mesh.cells();
    const double dx = mesh.dx();

    std::vector<std::vector<double>> weights(static_cast<std::size_t>(mesh.nodes()));
    for (Eigen::Index j = 0; j < mesh.nodes(); ++j) weights[j] = system.potential.coupling_weights(mesh.node(j));

    const Eigen::Index unknowns = layout.size();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
    std::vector<Eigen::Triplet<double>> entries;
    const std::size_t harmonics = static_cast<std::size_t>(system.potential.harmonics());
    entries.reserve(static_cast<std::size_t>(unknowns) * (3 + 4 * harmonics));

    for (Eigen::Index j = 0; j < mesh.nodes(); ++j) {
        for (Eigen::Index p = 0; p < velocities; ++p) {
            const Eigen::Index row = layout(p, j);
            if (row == UnknownLayout::pinned) continue;
            const double v = grid.velocity(p);
            const auto st = detail::stencil_for(scheme, grid.is_positive(p), j, cells);

            for (int t = 0; t < st.transport_terms; ++t) {
                const Eigen::Index node = j + st.transport[t].offset;
                const double coef = v * st.transport[t].weight / dx;
                const Eigen::Index col = layout(p, node);
                if (col == UnknownLayout::pinned)
                    rhs[row] -= coef * fb[p];
                else
                    entries.emplace_back(row, col, coef);
            }

            // -w * g_{p,node} with g_{p,node} = sum_n a_n sin(2 n kappa x)(f_{p-n} - f_{p+n}).
            for (int t = 0; t < st.coupling_terms; ++t) {
                const Eigen::Index node = j + st.coupling[t].offset;
                const auto& w = weights[node];
                for (std::size_t n = 1; n < w.size(); ++n) {
                    if (w[n] == 0.0) continue;
                    const Eigen::Index shift = static_cast<Eigen::Index>(n);
                    const double c = st.coupling[t].weight * w[n];
                    for (const auto& [q, sign] : {std::pair{p - shift, 1.0}, std::pair{p + shift, -1.0}}) {
                        if (q < 0 || q >= velocities) continue;
                        const Eigen::Index col = layout(q, node);
                        if (col == UnknownLayout::pinned)
                            rhs[row] += sign * c * fb[q];
                        else
                            entries.emplace_back(row, col, -sign * c);
                    }
                }
            }
        }
    }

    SparseRowMatrix matrix(unknowns, unknowns);
    matrix.setFromTriplets(entries.begin(), entries.end());
    return LinearProblem{std::move(matrix), std::move(rhs), layout};
}

/// ||M u - b||_2 / max(||b||_2, 1e-300).
inline double residual_norm(const LinearProblem& problem, const Eigen::VectorXd& candidate)
{
    if (candidate.size() != problem.matrix.cols())
        throw InvalidArgument("residual_norm: candidate has " + std::to_string(candidate.size()) +
                              " entries, system has " + std::to_string(problem.matrix.cols()));
    const Eigen::VectorXd r = problem.matrix * candidate - problem.rhs;
    return r.norm() / std::max(problem.rhs.norm(), 1e-300);
}

/// Scatter a vector of unknowns back onto the velocity x node grid,
/// filling pinned entries with the inflow data.
inline Eigen::MatrixXd to_grid_function(const WignerSystem& system, const UnknownLayout& layout,
                                        const Eigen::VectorXd& unknowns)
{
    const Eigen::Index velocities = system.grid.size();
    Eigen::MatrixXd f(velocities, layout.nodes());
    for (Eigen::Index j = 0; j < layout.nodes(); ++j)
        for (Eigen::Index p = 0; p < velocities; ++p) {
            const Eigen::Index k = layout(p, j);
            f(p, j) = k == UnknownLayout::pinned ? system.boundary[p] : unknowns[k];
        }
    return f;
}

inline constexpr double default_rel_tol = 1e-12;

/// Solve the boundary value problem with a difference scheme.
///
/// The global system is solved directly by a block-tridiagonal sweep over
/// mesh nodes (pairs of nodes for the second order upwind stencil), followed
/// by up to three steps of iterative refinement if the relative residual is
/// above `rel_tol`.
inline DiscreteSolution solve_bvp(const WignerSystem& system, Scheme scheme, double rel_tol = default_rel_tol)
{
    if (!(rel_tol > 0.0) || rel_tol > 1e-6)
        throw InvalidArgument("solve_bvp: rel_tol must lie in (0, 1e-6]");

    if (system.boundary.is_zero())
        return {Eigen::MatrixXd::Zero(system.grid.size(), system.mesh.nodes()), system, method_of(scheme), 0.0};

    const LinearProblem problem = assemble(system, scheme);
    const auto& layout = problem.layout;

    std::vector<Eigen::Index> starts;
    const Eigen::Index reach = detail::stencil_reach(scheme);
    for (Eigen::Index j = 0; j < layout.nodes(); j += reach) starts.push_back(layout.offset(j));
    starts.push_back(layout.size());

    const BlockTridiagonalSolver solver(problem.matrix, std::move(starts));
    Eigen::VectorXd u = solver.solve(problem.rhs);
    double residual = residual_norm(problem, u);
    for (int step = 0; step < 3 && residual > rel_tol; ++step) {
        u += solver.solve(problem.rhs - problem.matrix * u);
        residual = residual_norm(problem, u);
    }
    if (!(residual <= rel_tol))
        throw SolverFailure("solve_bvp: relative residual " + std::to_string(residual) + " above tolerance",
                            residual);

    return {to_grid_function(system, layout, u), system, method_of(scheme), residual};
}

}  // namespace wigner

#endif  // WIGNER_FD_SOLVERS_HPP
