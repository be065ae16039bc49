#pragma once

#include "qnls/radial.hpp"

#include <vector>

namespace qnls {

/// Converged profile plus the scalar diagnostics every solver reports.
struct SolveReport {
    explicit SolveReport(RadialField p) : profile(std::move(p)) {}

    RadialField profile;
    double energy = 0.0;
    double pohozaev_residual = 0.0; // relative to the Q_mu term scale
    double lambda = 0.0;
    double mass = 0.0;
    std::vector<double> mu_schedule_used;
    long iterations_total = 0;
    bool converged = false;
    int node_count = 0;
};

} // namespace qnls
