#ifndef WIGNER_WIGNER_HPP
#define WIGNER_WIGNER_HPP

#include "wigner/analysis.hpp"
#include "wigner/block_tridiagonal.hpp"
#include "wigner/config.hpp"
#include "wigner/error.hpp"
#include "wigner/fd_solvers.hpp"
#include "wigner/kinetic_system.hpp"
#include "wigner/potential.hpp"
#include "wigner/propagator.hpp"
#include "wigner/properties.hpp"
#include "wigner/velocity_grid.hpp"

#endif  // WIGNER_WIGNER_HPP
