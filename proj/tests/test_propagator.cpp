#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "support.hpp"

using namespace wigner;
using wigner::testing::free_system;
using wigner::testing::barrier_system;
using wigner::testing::pi;

namespace {
Eigen::VectorXd unit(const WignerSystem& sys, int index)
{
    Eigen::VectorXd e = Eigen::VectorXd::Zero(sys.grid.size());
    e[sys.grid.position_of(index)] = 1.0;
    return e;
}
}  // namespace

TEST(ContractionStep, CosineBarrierValue)
{
    EXPECT_NEAR(contraction_step(barrier_system()), pi / 80, 1e-15);
    EXPECT_NEAR(contraction_step(barrier_system()), 0.03927, 1e-5);
}

TEST(ContractionStep, ZeroPotentialIsInfinite)
{
    EXPECT_EQ(contraction_step(free_system()), std::numeric_limits<double>::infinity());
}

TEST(ContractionStep, QuarterShift)
{
    // C = 1 with a_1 = 1/2, s = kappa/4.
    const FourierPotential v(1.0, {0.0, 0.5});
    const auto g = VelocityGrid::build(pi, pi / 4, 5, true);
    const WignerSystem sys(v, g, SpatialMesh(1.0, 4), mono_energetic_boundary(g, 0));
    EXPECT_NEAR(contraction_step(sys), pi / 4, 1e-15);
}

TEST(PropagatorOptions, Validation)
{
    EXPECT_THROW((PropagatorOptions{1.0, 1e-13, 8}.validate()), InvalidArgument);
    EXPECT_THROW((PropagatorOptions{0.5, 0.0, 8}.validate()), InvalidArgument);
    EXPECT_THROW((PropagatorOptions{0.5, 1e-13, 0}.validate()), InvalidArgument);
    EXPECT_NO_THROW(PropagatorOptions{}.validate());
}

TEST(PicardPropagate, ZeroPotentialLeavesStateUnchanged)
{
    const auto sys = free_system();
    const Eigen::VectorXd f = Eigen::VectorXd::LinSpaced(sys.grid.size(), -3.0, 2.0);
    EXPECT_EQ(picard_propagate(sys, f, -0.5, 0.5), f);
    EXPECT_EQ(picard_propagate(sys, f, 0.3, -0.1), f);
    const auto eye = Eigen::MatrixXd::Identity(sys.grid.size(), sys.grid.size());
    EXPECT_EQ(propagator_matrix(sys, -0.5, 0.5).matrix, eye);
}

TEST(PicardPropagate, ForwardThenBackRecoversStart)
{
    const auto sys = barrier_system();
    const Eigen::VectorXd e0 = unit(sys, 0);
    const Eigen::VectorXd there = picard_propagate(sys, e0, 0.0, 0.1);
    const Eigen::VectorXd back = picard_propagate(sys, there, 0.1, 0.0);
    EXPECT_LT((back - e0).norm(), 1e-9);
}

TEST(PicardPropagate, MirrorIntervalsAgree)
{
    const auto sys = barrier_system();
    const Eigen::VectorXd e0 = unit(sys, 0);
    EXPECT_LT((picard_propagate(sys, e0, 0.0, 0.2) - picard_propagate(sys, e0, 0.0, -0.2)).norm(), 1e-9);
}

TEST(PicardPropagate, CompositionMatchesDirectPropagation)
{
    const auto sys = barrier_system();
    const Eigen::VectorXd f = unit(sys, 2) + 0.5 * unit(sys, -3);
    const Eigen::VectorXd direct = picard_propagate(sys, f, -0.3, 0.2);
    const Eigen::VectorXd split = picard_propagate(sys, picard_propagate(sys, f, -0.3, -0.05), -0.05, 0.2);
    EXPECT_LT((direct - split).norm(), 1e-10);
}

TEST(PicardPropagate, ConservesTheVelocityWeightedForm)
{
    // d/dx <T f, f> = <A f, f> = 0 by skew-symmetry, so the signed form
    // sum v_i f_i^2 is invariant along the flow.
    const auto sys = barrier_system();
    const Eigen::VectorXd f = unit(sys, 0) + 0.3 * unit(sys, 4) - 0.2 * unit(sys, -2);
    auto form = [&](const Eigen::VectorXd& g) {
        double s = 0.0;
        for (Eigen::Index p = 0; p < g.size(); ++p) s += sys.grid.velocity(p) * g[p] * g[p];
        return s;
    };
    EXPECT_NEAR(form(picard_propagate(sys, f, -0.5, 0.35)), form(f), 1e-10);
}

TEST(PicardPropagate, SubIntervalsRespectContractionStep)
{
    const auto sys = barrier_system();
    PicardTrace trace;
    const Eigen::VectorXd e0 = unit(sys, 0);
    picard_propagate(sys, e0, -0.2, 0.1, {}, &trace);
    ASSERT_FALSE(trace.steps.empty());
    const double limit = 0.5 * contraction_step(sys) * (1 + 1e-12);
    for (const auto& step : trace.steps) {
        EXPECT_LE(std::abs(step.b - step.a), limit);
        ASSERT_FALSE(step.gaps.empty());
        // The stopping rule is relative to the norm of the sub-interval start.
        const double scale = std::max(1.0, picard_propagate(sys, e0, -0.2, step.a).norm());
        EXPECT_LE(step.gaps.back(), 1e-13 * scale);
    }
    EXPECT_EQ(trace.steps.front().a, -0.2);
    EXPECT_EQ(trace.steps.back().b, 0.1);
}

TEST(PicardPropagate, RejectsIntervalOutsideDevice)
{
    const auto sys = barrier_system();
    EXPECT_THROW(picard_propagate(sys, unit(sys, 0), 0.0, 0.6), InvalidArgument);
    EXPECT_THROW(picard_propagate(sys, unit(sys, 0), -0.51, 0.0), InvalidArgument);
}

TEST(PropagatorMatrix, IdentityOnDegenerateInterval)
{
    const auto sys = barrier_system();
    const auto eye = Eigen::MatrixXd::Identity(sys.grid.size(), sys.grid.size());
    EXPECT_EQ(propagator_matrix(sys, 0.17, 0.17).matrix, eye);
}

TEST(Shooting, FreeStreaming)
{
    const auto sol = solve_bvp_shooting(free_system(10));
    const Eigen::Index p0 = sol.system.grid.position_of(0);
    for (Eigen::Index j = 0; j < sol.values.cols(); ++j) {
        EXPECT_EQ(sol.values(p0, j), 1.0);
        EXPECT_EQ(sol.values.col(j).cwiseAbs().sum(), 1.0);
    }
    EXPECT_EQ(sol.method, Method::oracle);
}

TEST(Shooting, ZeroBoundaryShortCircuits)
{
    const auto sys = barrier_system(10);
    const auto sol = solve_bvp_shooting(sys.with_boundary(tabulated_boundary(sys.grid, {})));
    EXPECT_EQ(sol.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Shooting, CosineBarrierIsSymmetricAndMatchesBoundary)
{
    const auto sol = solve_bvp_shooting(barrier_system(100));
    EXPECT_LE(symmetry_error(sol), 1e-7);
    EXPECT_LE(sol.residual, 1e-9);
    EXPECT_EQ(sol.values.col(0).tail(40), sol.system.boundary.left_inflow());
}
