#ifndef WIGNER_PROPERTIES_HPP
#define WIGNER_PROPERTIES_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wigner/analysis.hpp"
#include "wigner/fd_solvers.hpp"
#include "wigner/potential.hpp"
#include "wigner/propagator.hpp"

namespace wigner {

struct PropertyResult {
    std::string name;
    bool passed;
    double measured;
    double threshold;
};

/// Induced infinity norm (max absolute row sum).
inline double inf_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

namespace properties {

inline PropertyResult coupling_skew_symmetry(const WignerSystem& sys, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> xs(-0.5 * sys.mesh.length(), 0.5 * sys.mesh.length());
    std::normal_distribution<double> normal;
    const Eigen::Index n = sys.grid.size();
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd f(n), h(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            f[k] = normal(rng);
            h[k] = normal(rng);
        }
        const double x = xs(rng);
        const Eigen::VectorXd af = apply_coupling(sys.potential, sys.grid, x, f);
        const Eigen::VectorXd ah = apply_coupling(sys.potential, sys.grid, x, h);
        const double scale = std::max(1.0, af.norm() * h.norm() + f.norm() * ah.norm());
        worst = std::max(worst, std::abs(f.dot(ah) + af.dot(h)) / scale);
    }
    return {"coupling skew-symmetry", worst <= 1e-13, worst, 1e-13};
}

/// Counts random unit f and random x with ||A(x) f|| > C.
inline PropertyResult coupling_bound_holds(const WignerSystem& sys, std::mt19937_64& rng, int vectors = 100,
                                           int points = 10)
{
    std::uniform_real_distribution<double> xs(-0.5 * sys.mesh.length(), 0.5 * sys.mesh.length());
    std::normal_distribution<double> normal;
    const double bound = coupling_bound(sys.potential);
    const Eigen::Index n = sys.grid.size();
    int violations = 0;
    for (int p = 0; p < points; ++p) {
        const double x = xs(rng);
        for (int v = 0; v < vectors; ++v) {
            Eigen::VectorXd f(n);
            for (Eigen::Index k = 0; k < n; ++k) f[k] = normal(rng);
            f.normalize();
            if (apply_coupling(sys.potential, sys.grid, x, f).norm() > bound) ++violations;
        }
    }
    return {"coupling bound (violations)", violations == 0, static_cast<double>(violations), 0.0};
}

inline PropertyResult propagator_identity(const WignerSystem& sys, const PropagatorOptions& opts)
{
    const double l = sys.mesh.length();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(sys.grid.size(), sys.grid.size());
    double worst = 0.0;
    for (double x : {-0.25 * l, 0.0, l / 3.0}) worst = std::max(worst, inf_norm(propagator_matrix(sys, x, x, opts).matrix - eye));
    return {"propagator identity on [x, x]", worst == 0.0, worst, 0.0};
}

inline PropertyResult propagator_mirror(const WignerSystem& sys, const PropagatorOptions& opts,
                                        const std::vector<double>& xs)
{
    double worst = 0.0;
    for (double x : xs)
        worst = std::max(worst, inf_norm(propagator_matrix(sys, 0.0, x, opts).matrix -
                                         propagator_matrix(sys, 0.0, -x, opts).matrix));
    return {"propagator mirror T[0,x] = T[0,-x]", worst <= 1e-8, worst, 1e-8};
}

inline PropertyResult propagator_inversion(const WignerSystem& sys, const PropagatorOptions& opts,
                                           std::mt19937_64& rng, int intervals = 3)
{
    const double l = sys.mesh.length();
    std::uniform_real_distribution<double> length_dist(0.05 * l, 0.5 * l);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(sys.grid.size(), sys.grid.size());
    double worst = 0.0;
    for (int k = 0; k < intervals; ++k) {
        const double len = length_dist(rng);
        const double x1 = -0.5 * l + unit(rng) * (l - len);
        const double x2 = x1 + len;
        const auto forward = propagator_matrix(sys, x1, x2, opts).matrix;
        const auto backward = propagator_matrix(sys, x2, x1, opts).matrix;
        worst = std::max(worst, inf_norm(forward * backward - eye));
    }
    return {"propagator inversion", worst <= 1e-8, worst, 1e-8};
}

/// With the coupling removed every f_i must stay at its inflow value.
inline PropertyResult free_streaming(const WignerSystem& sys, const PropagatorOptions& opts)
{
    const WignerSystem free(FourierPotential(sys.potential.period(), {sys.potential.coeffs()[0]}), sys.grid,
                            sys.mesh, sys.boundary);
    double worst = 0.0;
    auto check = [&](const DiscreteSolution& sol) {
        for (Eigen::Index j = 0; j < sol.values.cols(); ++j)
            worst = std::max(worst, (sol.values.col(j) - free.boundary.values()).cwiseAbs().maxCoeff());
    };
    for (Scheme s : {Scheme::upwind1, Scheme::upwind2, Scheme::central}) check(solve_bvp(free, s));
    check(solve_bvp_shooting(free, opts));
    return {"free streaming", worst < 1e-12, worst, 1e-12};
}

/// Current drift of the second order schemes must shrink from Nx to 4 Nx,
/// unless it is already at roundoff (<= 1e-10) on the coarse mesh.
inline PropertyResult current_conservation(const WignerSystem& sys)
{
    double worst_ratio = 0.0;
    bool ok = true;
    for (Scheme s : {Scheme::upwind2, Scheme::central}) {
        const double coarse = current_drift(solve_bvp(sys, s));
        const double fine = current_drift(solve_bvp(sys.with_cells(4 * sys.mesh.cells()), s));
        if (coarse <= 1e-10) {
            ok = ok && fine <= 1e-10;
            continue;
        }
        worst_ratio = std::max(worst_ratio, fine / coarse);
        ok = ok && fine < coarse;
    }
    return {"current conservation under refinement", ok, worst_ratio, 1.0};
}

inline PropertyResult central_symmetry(const WignerSystem& sys)
{
    const double e = symmetry_error(solve_bvp(sys, Scheme::central));
    return {"central scheme mirror symmetry", e <= 1e-10, e, 1e-10};
}

}  // namespace properties

/// Runs the full property suite on `sys`. Deterministic for a given seed.
inline std::vector<PropertyResult> run_property_suite(const WignerSystem& sys, const PropagatorOptions& opts = {},
                                                      std::uint64_t seed = 20240611)
{
    std::mt19937_64 rng(seed);
    const double l = sys.mesh.length();
    std::vector<PropertyResult> results;
    results.push_back(properties::coupling_skew_symmetry(sys, rng));
    results.push_back(properties::coupling_bound_holds(sys, rng));
    results.push_back(properties::propagator_identity(sys, opts));
    results.push_back(properties::propagator_mirror(sys, opts, {0.05 * l, 0.15 * l, 0.25 * l, 0.45 * l}));
    results.push_back(properties::propagator_inversion(sys, opts, rng));
    results.push_back(properties::free_streaming(sys, opts));
    results.push_back(properties::current_conservation(sys));
    results.push_back(properties::central_symmetry(sys));
    return results;
}

}  // namespace wigner

#endif  // WIGNER_PROPERTIES_HPP
