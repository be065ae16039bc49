#pragma once

#include "qnls/fiber.hpp"
#include "qnls/report.hpp"
#include "qnls/shooting.hpp"

#include <optional>

namespace qnls {

/// Decreasing perturbation weights plus the descent knobs. N = 1 runs ignore
/// mu_values (the functional is differentiable unperturbed); every run ends
/// with an unperturbed polish stage.
struct ContinuationSchedule {
    std::vector<double> mu_values = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    int max_iterations_per_stage = 500;
    double step_size = 1.0;        // initial line-search step
    double energy_stall_tol = 1e-11;
    int rearrange_every = 25;      // 0 disables the rearrangement hook
    int restarts = 5;
    bool precondition = true;      // H^1-metric descent direction
};

/// Ground state on the mass sphere via descent restricted to the Pohozaev
/// manifold: gradient step, tangent projection, mass renormalization, fiber
/// projection, with Armijo control on the composite map and a decreasing mu
/// schedule warm-starting each stage. Critical runs (p = 4+4/N) keep iterates
/// inside the open set O and seed from the rescaled Q_{p*}^{1/2}.
SolveReport normalized_ground_state(const ModelParams& prm,
                                    const ContinuationSchedule& schedule,
                                    GridPtr grid,
                                    const std::optional<RadialField>& seed = {});

} // namespace qnls
