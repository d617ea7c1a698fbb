// Acceptance run on the cosine-barrier device. Prints one PASS/FAIL line per
// criterion with the measured values; exits nonzero if any criterion fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"

using namespace wigner;
using wigner::testing::barrier_system;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

std::string join(const std::vector<std::string>& parts)
{
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
    return s;
}

Outcome table_row(Method method, const std::vector<int>& cells, const std::vector<double>& reference,
                  const std::vector<double>& tolerance)
{
    const auto report = convergence_study(barrier_system(), method, cells);
    bool ok = true;
    std::vector<std::string> parts;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const auto& row = report.rows[k];
        const double ratio = row.symmetry_error / reference[k];
        const bool within = !row.failure && std::abs(ratio - 1.0) <= tolerance[k];
        ok = ok && within;
        parts.push_back(fmt::format("Nx={} e={:.4g} reference={:.4g} ratio={:.3f}{} ({:.1f}s)", row.cells,
                                    row.symmetry_error, reference[k], ratio, within ? "" : " OUT", row.runtime_seconds));
    }
    return {ok, join(parts)};
}

Outcome criterion_upwind1()
{
    return table_row(Method::upwind1, {100, 400, 1600, 6400, 25600}, {1.03, 0.7666, 0.4185, 0.1502, 0.0422},
                     {0.1, 0.1, 0.1, 0.1, 0.1});
}

Outcome criterion_upwind2()
{
    return table_row(Method::upwind2, {100, 400, 1600}, {0.0462, 7.446e-4, 1.151e-5}, {0.1, 0.1, 0.5});
}

Outcome criterion_central()
{
    const auto sol = solve_bvp(barrier_system(100), Scheme::central);
    const double e = symmetry_error(sol);
    return {e <= 1e-10, fmt::format("e={:.3e} (limit 1e-10), residual={:.2e}", e, sol.residual)};
}

Outcome criterion_figure()
{
    const auto sol = solve_bvp(barrier_system(100), Scheme::central);
    const auto& grid = sol.system.grid;
    const double fmin = sol.values.minCoeff();
    const Eigen::VectorXd n = density(sol);
    const Eigen::Index mid = sol.system.mesh.cells() / 2;
    double right_min = std::numeric_limits<double>::infinity();
    Eigen::Index where = mid + 1;
    for (Eigen::Index j = mid + 1; j < n.size(); ++j)
        if (n[j] < right_min) right_min = n[j], where = j;
    const double v0 = grid.velocity(grid.position_of(0));
    double high = 0.0;
    for (Eigen::Index p = 0; p < grid.size(); ++p)
        if (std::abs(grid.velocity(p)) > v0 * (1 + 1e-12)) high = std::max(high, sol.values.row(p).maxCoeff());
    const bool a = fmin < 0.0, b = right_min > 0.0, c = high > 1e-6;
    return {a && b && c,
            fmt::format("(a) min f={:.4g} {}; (b) min density on x>0 = {:.4g} at x={:.2f} {}; (c) max f at |v|>v0 = "
                        "{:.4g} {}",
                        fmin, a ? "ok" : "FAIL", right_min, sol.system.mesh.node(where), b ? "ok" : "FAIL", high,
                        c ? "ok" : "FAIL")};
}

Outcome criterion_mirror()
{
    const double l = 1.0;
    const auto r = properties::propagator_mirror(barrier_system(), {}, {0.05 * l, 0.15 * l, 0.25 * l, 0.45 * l});
    return {r.passed, fmt::format("max ||P[0,x] - P[0,-x]||_inf = {:.3e} (limit 1e-8)", r.measured)};
}

Outcome criterion_inversion()
{
    std::mt19937_64 rng(20240611);
    const auto r = properties::propagator_inversion(barrier_system(), {}, rng, 3);
    return {r.passed, fmt::format("max ||P P^-1 - I||_inf = {:.3e} (limit 1e-8)", r.measured)};
}

Outcome criterion_oracle()
{
    auto relative_gap = [](int cells) {
        const auto sys = barrier_system(cells);
        const auto oracle = solve_bvp_shooting(sys);
        const auto central = solve_bvp(sys, Scheme::central);
        return scheme_difference(oracle, central) / wigner::testing::total_mass(oracle);
    };
    const double g1600 = relative_gap(1600), g3200 = relative_gap(3200);
    const bool ok = g1600 <= 1e-3 && g3200 < g1600;
    return {ok, fmt::format("L1/mass Nx=1600: {:.3e} (limit 1e-3), Nx=3200: {:.3e}, ratio {:.2f}", g1600, g3200,
                            g1600 / g3200)};
}

Outcome criterion_bound()
{
    std::mt19937_64 rng(20240611);
    const auto r = properties::coupling_bound_holds(barrier_system(), rng, 100, 10);
    return {r.passed, fmt::format("violations: {:.0f} of 1000", r.measured)};
}

Outcome criterion_free()
{
    const auto sys = wigner::testing::free_system(100);
    const Eigen::Index p0 = sys.grid.position_of(0);
    double worst = 0.0, others = 0.0;
    auto check = [&](const DiscreteSolution& sol) {
        worst = std::max(worst, (sol.values.row(p0).array() - 1.0).abs().maxCoeff());
        Eigen::MatrixXd rest = sol.values;
        rest.row(p0).setZero();
        others = std::max(others, rest.cwiseAbs().maxCoeff());
    };
    for (Scheme s : {Scheme::upwind1, Scheme::upwind2, Scheme::central}) check(solve_bvp(sys, s));
    check(solve_bvp_shooting(sys));
    return {worst < 1e-12, fmt::format("max |f_0 - 1| = {:.3e}, max |f_i|, i != 0 = {:.3e} (limit 1e-12)", worst, others)};
}

Outcome criterion_current()
{
    bool ok = true;
    std::vector<std::string> parts;
    for (Scheme s : {Scheme::upwind2, Scheme::central}) {
        std::vector<double> drift;
        for (int cells : {100, 400, 1600}) drift.push_back(current_drift(solve_bvp(barrier_system(cells), s)));
        const bool dec = drift[1] < drift[0] && drift[2] < drift[1];
        ok = ok && dec;
        parts.push_back(fmt::format("{}: {:.3e}, {:.3e}, {:.3e}{}", to_string(s), drift[0], drift[1], drift[2],
                                    dec ? "" : " not decreasing"));
    }
    return {ok, join(parts)};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 upwind1 symmetry errors match the reference row", criterion_upwind1},
        {"2 upwind2 symmetry errors match the reference row", criterion_upwind2},
        {"3 central symmetry error at Nx=100", criterion_central},
        {"4 negative regions, tunnelling density, scattering", criterion_figure},
        {"5 propagator mirror identity", criterion_mirror},
        {"6 propagator inversion", criterion_inversion},
        {"7 oracle agrees with central scheme", criterion_oracle},
        {"8 coupling operator bound", criterion_bound},
        {"9 free streaming invariant", criterion_free},
        {"10 current drift decreases under refinement", criterion_current},
    };

    int failures = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.passed) ++failures;
        std::printf("%s  criterion %s | %s [%.1fs]\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
