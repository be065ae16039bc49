#pragma once

#include "qnls/report.hpp"
#include "qnls/shooting.hpp"

namespace qnls {

/// Radial solution with exactly k sign changes by two-parameter shooting on
/// the unperturbed Euler-Lagrange equation: inner bisection on u(0) at fixed
/// lambda selects the node count, an outer secant iteration on lambda matches
/// the prescribed mass (falling back to bisection over a lambda log-grid).
SolveReport excited_state(const ModelParams& prm, int node_target,
                          const GridConfig& cfg = {});

} // namespace qnls
