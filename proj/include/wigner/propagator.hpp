#ifndef WIGNER_PROPAGATOR_HPP
#define WIGNER_PROPAGATOR_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wigner/error.hpp"
#include "wigner/fd_solvers.hpp"
#include "wigner/kinetic_system.hpp"

namespace wigner {

struct PropagatorOptions {
    /// Sub-interval length as a fraction of the contraction step.
    double step_fraction = 0.5;
    /// Stop when successive Picard iterates differ by at most this much in
    /// the H norm, relative to max(1, |start|).
    double picard_tol = 1e-13;
    /// Composite Simpson panels per sub-interval before refinement.
    int quad_panels = 8;

    void validate() const
    {
        if (!(step_fraction > 0.0 && step_fraction < 1.0))
            throw InvalidArgument("propagator: step_fraction must lie in (0, 1)");
        if (!(picard_tol > 0.0)) throw InvalidArgument("propagator: picard_tol must be positive");
        if (quad_panels < 1) throw InvalidArgument("propagator: quad_panels must be >= 1");
    }
};

inline constexpr int picard_iteration_cap = 200;
inline constexpr int max_quad_panels = 1024;

/// Length below which the Picard map on [x1, x2] is a contraction:
/// min |v| / C. Infinite when the potential carries no coupling.
inline double contraction_step(const WignerSystem& system) noexcept
{
    const double c = coupling_bound(system.potential);
    if (c == 0.0) return std::numeric_limits<double>::infinity();
    return system.grid.min_abs_velocity() / c;
}

/// Dense map from f(x1) to f(x2) on the truncated velocity space.
struct PropagatorMatrix {
    Eigen::MatrixXd matrix;
    double x1;
    double x2;
};

/// Per sub-interval record of the Picard iteration, for diagnostics.
struct PicardTrace {
    struct Step {
        double a;
        double b;
        int panels;
        std::vector<double> gaps;
    };
    std::vector<Step> steps;
};

namespace detail {

/// Cumulative Simpson integral of samples s_0..s_{2P} with node spacing h.
/// Even nodes use composite Simpson; odd nodes add the half-panel rule
/// h/12 (5 s_0 + 8 s_1 - s_2) to the preceding even node.
template <typename Sample, typename Out>
void cumulative_simpson(const std::vector<Sample>& samples, double h, std::vector<Out>& out)
{
    const std::size_t n = samples.size();
    out.resize(n);
    out[0] = Out::Zero(samples[0].rows(), samples[0].cols());
    for (std::size_t m = 0; m + 2 < n; m += 2) {
        out[m + 1] = out[m] + (h / 12.0) * (5.0 * samples[m] + 8.0 * samples[m + 1] - samples[m + 2]);
        out[m + 2] = out[m] + (h / 3.0) * (samples[m] + 4.0 * samples[m + 1] + samples[m + 2]);
    }
}

class PicardPropagator {
public:
    PicardPropagator(const WignerSystem& system, const PropagatorOptions& opts)
        : system_(system), opts_(opts), inv_velocity_(system.grid.velocities().cwiseInverse())
    {
        opts_.validate();
    }

    /// Columns of `start` carried from x1 to x2.
    Eigen::MatrixXd propagate(const Eigen::MatrixXd& start, double x1, double x2, PicardTrace* trace = nullptr) const
    {
        check_interval(x1, x2);
        if (start.rows() != system_.grid.size())
            throw InvalidArgument("propagator: start vector does not match the velocity grid");
        if (x1 == x2) return start;
        const double step = opts_.step_fraction * contraction_step(system_);
        const auto pieces = std::isinf(step) ? 1.0 : std::ceil(std::abs(x2 - x1) / step);
        const int count = static_cast<int>(std::max(1.0, pieces));
        Eigen::MatrixXd f = start;
        const double width = x2 - x1;
        for (int k = 0; k < count; ++k) {
            // Endpoints of the form x1 + k (x2 - x1) / count so that [0, x] and
            // [0, -x] are split at exactly negated points.
            const double a = k == 0 ? x1 : x1 + (k * width) / count;
            const double b = k + 1 == count ? x2 : x1 + ((k + 1) * width) / count;
            f = sub_interval(f, a, b, trace);
        }
        return f;
    }

private:
    void check_interval(double x1, double x2) const
    {
        const double half = 0.5 * system_.mesh.length();
        if (!std::isfinite(x1) || !std::isfinite(x2) || std::abs(x1) > half || std::abs(x2) > half)
            throw InvalidArgument("propagator: interval [" + std::to_string(x1) + ", " + std::to_string(x2) +
                                  "] leaves the device [-l/2, l/2]");
    }

    /// Picard iteration f <- f(a) + int_a^x T^{-1} A(y) f(y) dy on Simpson nodes.
    Eigen::MatrixXd picard(const Eigen::MatrixXd& start, double a, double b, int panels,
                           std::vector<double>* gaps) const
    {
        const int n = 2 * panels + 1;
        const double h = (b - a) / (2.0 * panels);
        std::vector<std::vector<double>> weights(n);
        for (int m = 0; m < n; ++m) {
            const double y = m == 0 ? a : (m == n - 1 ? b : a + m * h);
            weights[m] = system_.potential.coupling_weights(y);
        }

        const Eigen::Index rows = start.rows(), cols = start.cols();
        std::vector<Eigen::MatrixXd> iterate(n, start);
        std::vector<Eigen::MatrixXd> slope(n, Eigen::MatrixXd::Zero(rows, cols));
        std::vector<Eigen::MatrixXd> integral;
        const double scale = std::max(1.0, column_norm_max(start));

        double gap = std::numeric_limits<double>::infinity();
        for (int it = 0; it < picard_iteration_cap; ++it) {
            for (int m = 0; m < n; ++m) {
                slope[m].setZero();
                accumulate_coupling(weights[m], iterate[m], slope[m]);
                slope[m] = inv_velocity_.asDiagonal() * slope[m];
            }
            cumulative_simpson(slope, h, integral);
            gap = 0.0;
            for (int m = 1; m < n; ++m) {
                integral[m] += start;
                gap = std::max(gap, column_norm_max(integral[m] - iterate[m]));
                iterate[m].swap(integral[m]);
            }
            if (gaps) gaps->push_back(gap);
            if (gap <= opts_.picard_tol * scale) return iterate[n - 1];
        }
        throw SolverFailure("propagator: Picard iteration did not converge on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]",
                            gap);
    }

    /// Runs Simpson at P and 2P panels and doubles P until the Richardson
    /// estimate |fine - coarse| / 15 of the fine result's quadrature error is
    /// below the Picard tolerance. Returns the finer result.
    Eigen::MatrixXd sub_interval(const Eigen::MatrixXd& start, double a, double b, PicardTrace* trace) const
    {
        const double scale = std::max(1.0, column_norm_max(start));
        // Agreement floor: a few hundred ulps of the propagated values.
        const double floor = 256.0 * std::numeric_limits<double>::epsilon();
        int panels = opts_.quad_panels;
        std::vector<double> coarse_gaps, fine_gaps;
        Eigen::MatrixXd coarse = picard(start, a, b, panels, &coarse_gaps);
        for (;;) {
            fine_gaps.clear();
            Eigen::MatrixXd fine = picard(start, a, b, 2 * panels, &fine_gaps);
            const double estimate = column_norm_max(fine - coarse) / 15.0;
            if (estimate <= std::max(opts_.picard_tol, floor) * scale) {
                if (trace) trace->steps.push_back({a, b, 2 * panels, fine_gaps});
                return fine;
            }
            panels *= 2;
            if (2 * panels > max_quad_panels)
                throw SolverFailure("propagator: Simpson quadrature did not settle on [" + std::to_string(a) +
                                        ", " + std::to_string(b) + "]",
                                    estimate);
            coarse = std::move(fine);
        }
    }

    static double column_norm_max(const Eigen::MatrixXd& m)
    {
        return m.cols() == 0 ? 0.0 : m.colwise().norm().maxCoeff();
    }

    const WignerSystem& system_;
    PropagatorOptions opts_;
    Eigen::VectorXd inv_velocity_;
};

}  // namespace detail

/// Approximates T_{[x1,x2]} f by Picard iteration on sub-intervals no longer
/// than step_fraction times the contraction step.
inline Eigen::VectorXd picard_propagate(const WignerSystem& system, const Eigen::VectorXd& start, double x1,
                                        double x2, const PropagatorOptions& opts = {},
                                        PicardTrace* trace = nullptr)
{
    const detail::PicardPropagator prop(system, opts);
    return prop.propagate(start, x1, x2, trace);
}

/// Column k is the propagation of the k-th unit vector.
inline PropagatorMatrix propagator_matrix(const WignerSystem& system, double x1, double x2,
                                          const PropagatorOptions& opts = {})
{
    const detail::PicardPropagator prop(system, opts);
    const Eigen::Index size = system.grid.size();
    return {prop.propagate(Eigen::MatrixXd::Identity(size, size), x1, x2), x1, x2};
}

/// Boundary value problem solved by shooting across the whole device.
///
/// With P = T_{[-l/2, l/2]}, the rows of f(l/2) = P f(-l/2) for v < 0 fix the
/// unknown outgoing values f(-l/2) at v < 0. The full left state is then
/// carried node by node across the mesh. Pinned entries hold the inflow data
/// exactly; `residual` reports how far the carried state misses the right
/// inflow data, relative to the boundary data norm.
inline DiscreteSolution solve_bvp_shooting(const WignerSystem& system, const PropagatorOptions& opts = {})
{
    const auto& grid = system.grid;
    const auto& mesh = system.mesh;
    const Eigen::Index neg = grid.negative_count(), pos = grid.positive_count();
    const double half = 0.5 * mesh.length();

    if (system.boundary.is_zero())
        return {Eigen::MatrixXd::Zero(grid.size(), mesh.nodes()), system, Method::oracle, 0.0};

    const detail::PicardPropagator prop(system, opts);
    const Eigen::MatrixXd p = prop.propagate(Eigen::MatrixXd::Identity(grid.size(), grid.size()), -half, half);

    const Eigen::VectorXd right_in = system.boundary.right_inflow();
    const Eigen::VectorXd left_in = system.boundary.left_inflow();
    const Eigen::MatrixXd reduced = p.topLeftCorner(neg, neg);
    const Eigen::VectorXd rhs = right_in - p.topRightCorner(neg, pos) * left_in;

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(reduced);
    if (!lu.isInvertible())
        throw SolverFailure("shooting: reduced outgoing system is singular", lu.rcond());

    Eigen::VectorXd state(grid.size());
    state.head(neg) = lu.solve(rhs);
    state.tail(pos) = left_in;

    Eigen::MatrixXd values(grid.size(), mesh.nodes());
    values.col(0) = state;
    for (Eigen::Index j = 1; j < mesh.nodes(); ++j) {
        state = prop.propagate(state, mesh.node(j - 1), mesh.node(j));
        values.col(j) = state;
    }

    const double miss = (values.col(mesh.cells()).head(neg) - right_in).norm() /
                        std::max(system.boundary.values().norm(), 1e-300);
    values.col(mesh.cells()).head(neg) = right_in;
    return {std::move(values), system, Method::oracle, miss};
}

}  // namespace wigner

#endif  // WIGNER_PROPAGATOR_HPP
