#pragma once

#include "qnls/report.hpp"
#include "qnls/scans.hpp"

#include <string>
#include <vector>

namespace qnls {

/// Profile CSV: header `r,u`, one row per node, 17 significant digits.
void write_profile_csv(const std::string& path, const RadialField& u);

/// Rebuild a field from a profile CSV; the (uniform) grid is inferred from
/// the r column, the dimension is supplied by the caller.
RadialField read_profile_csv(const std::string& path, int dimension);

/// Report JSON with exactly the fields profile_path, energy,
/// pohozaev_residual, lambda, mass, mu_schedule_used, iterations_total,
/// converged, node_count.
void write_report_json(const std::string& path, const SolveReport& report,
                       const std::string& profile_path);

struct StoredReport {
    std::string profile_path;
    double energy = 0.0;
    double pohozaev_residual = 0.0;
    double lambda = 0.0;
    double mass = 0.0;
    std::vector<double> mu_schedule_used;
    long iterations_total = 0;
    bool converged = false;
    int node_count = 0;
};

StoredReport read_report_json(const std::string& path);

/// Scan CSV with header `a,classification,inf_fiber_energy`.
void write_critical_scan_csv(const std::string& path,
                             const std::vector<CriticalScanRow>& rows);

/// Concentration CSV with header `delta,a_n,eps_n,w_l1,dist_l1,dist_l2`.
void write_concentration_csv(const std::string& path,
                             const std::vector<ConcentrationRow>& rows);

/// Two-column whitespace-separated plot data.
void write_xy(const std::string& path, const std::vector<double>& x,
              const std::vector<double>& y);

} // namespace qnls
