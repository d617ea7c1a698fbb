#ifndef WIGNER_TEST_SUPPORT_HPP
#define WIGNER_TEST_SUPPORT_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "wigner/wigner.hpp"

namespace wigner::testing {

constexpr double pi = std::numbers::pi;

inline WignerSystem make_system(std::vector<double> coeffs, int cells, int M = 40, int i0 = 0)
{
    FourierPotential potential(1.0, std::move(coeffs));
    VelocityGrid grid = build_velocity_grid(pi, pi / 2, M, true);
    BoundaryData boundary = mono_energetic_boundary(grid, i0);
    return WignerSystem(potential, grid, SpatialMesh(1.0, cells), boundary);
}

/// V(x) = 20 (1 + cos 2 pi x) on [-1/2, 1/2], M = 40, s = kappa/2, unit inflow at v_0.
inline WignerSystem barrier_system(int cells = 100) { return make_system({20.0, 20.0}, cells); }

inline WignerSystem free_system(int cells = 20, int M = 40) { return make_system({0.0}, cells, M); }

inline double total_mass(const DiscreteSolution& sol)
{
    return sol.values.cwiseAbs().sum() * sol.system.mesh.dx();
}

}  // namespace wigner::testing

#endif
