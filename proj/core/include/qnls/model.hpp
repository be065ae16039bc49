#pragma once

#include <stdexcept>
#include <string>

namespace qnls {

/// Raised when a parameter set violates one of the admissibility hypotheses;
/// the message names the violated hypothesis.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Problem parameters (N, p, a, theta, mu). theta and mu configure the
/// perturbed functional; N = 1 runs are always unperturbed (mu = 0).
struct ModelParams {
    int dimension = 2;   // N
    double p = 7.0;
    double mass = 1.0;   // prescribed L^2 mass a
    double theta = 2.5;
    double mu = 0.0;

    ModelParams with_mu(double new_mu) const {
        ModelParams q = *this;
        q.mu = new_mu;
        return q;
    }
};

/// N(q-2)/(2q), the dilation exponent of the L^q term along the mass fiber.
double gamma_exponent(double q, int dimension);

/// Mass-critical exponent p* = 4 + 4/N.
double mass_critical_exponent(int dimension);

/// Quasilinear critical exponent 2*2^* = 4N/(N-2) for N >= 3, infinity below.
double quasilinear_critical_exponent(int dimension);

bool is_mass_critical(const ModelParams& prm);

/// Midpoint of the admissible theta window for the given dimension.
double default_theta(int dimension);

/// Structural checks: p window, theta window, mu/N coupling, positive mass.
/// Throws ValidationError naming the violated hypothesis (H1/H2/H3/H4 or
/// theta-window). The mass-critical window on a additionally needs the
/// threshold a* and is checked by validate_mass_window.
void validate_params(const ModelParams& prm);

/// (H3)/(H4) mass windows for mass-critical runs, given a* = a_star(N).
void validate_mass_window(const ModelParams& prm, double a_star_value);

/// Hypotheses (H1)'/(H2) plus the node-count range for excited-state runs.
void validate_excited(const ModelParams& prm, int node_target);

} // namespace qnls
