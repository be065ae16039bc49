#pragma once

#include "qnls/ground_state.hpp"

#include <string>
#include <vector>

namespace qnls {

/// One row of the mass-critical fiber scan at p = 4 + 4/N: the infimum of the
/// sampled fiber energies of w_a = (a/a*)^{1/2} Q_{p*}^{1/2} and the sign of
/// the coefficient a_quad - a_p/p* that governs the s -> +infinity behavior.
struct CriticalScanRow {
    double a = 0.0;
    std::string classification; // bounded-below | degenerate-coefficient-zero | unbounded-below
    double inf_fiber_energy = 0.0;
    double growth_coefficient = 0.0; // a_quad - a_p/p*, relative sign decides
};

std::vector<CriticalScanRow> critical_fiber_scan(int dimension,
                                                 const std::vector<double>& mass_grid);

/// One row of the concentration sweep a_n = a*(1+delta): the blow-up scale
/// eps_n, the rescaled squared profile w_n, its L^1 norm and its distances
/// to Q_{p*}.
struct ConcentrationRow {
    double delta = 0.0;
    double a_n = 0.0;
    double eps_n = 0.0;
    double w_l1 = 0.0;
    double dist_l1 = 0.0;
    double dist_l2 = 0.0;
    bool converged = false;
};

struct ConcentrationOptions {
    GridConfig grid;
    ContinuationSchedule schedule;
    /// Rescaling constant (N a*/denominator)^{1/(2+N)}; the proof's value is
    /// 4, override here to explore alternatives.
    double rescale_denominator = 4.0;
};

/// Solve the critical ground state for each offset delta (rows sorted by
/// delta descending, each warm-started from the previous one) and tabulate
/// the rescaled profiles against Q_{p*}.
std::vector<ConcentrationRow> concentration_study(int dimension,
                                                  const std::vector<double>& offsets,
                                                  const ConcentrationOptions& opt = {});

} // namespace qnls
