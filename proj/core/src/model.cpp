#include "qnls/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qnls {

double gamma_exponent(double q, int dimension) {
    if (!(q > 0.0))
        throw std::invalid_argument("gamma_exponent: q must be positive");
    return dimension * (q - 2.0) / (2.0 * q);
}

double mass_critical_exponent(int dimension) {
    return 4.0 + 4.0 / dimension;
}

double quasilinear_critical_exponent(int dimension) {
    if (dimension >= 3)
        return 4.0 * dimension / (dimension - 2.0);
    return std::numeric_limits<double>::infinity();
}

bool is_mass_critical(const ModelParams& prm) {
    const double p_star = mass_critical_exponent(prm.dimension);
    return std::abs(prm.p - p_star) <= 1e-9 * p_star;
}

double default_theta(int dimension) {
    if (dimension <= 1) return 2.0; // unused for N = 1
    if (dimension == 2) return 2.5;
    const double lo = 4.0 * dimension / (dimension + 2.0);
    const double hi = std::min((4.0 * dimension + 4.0) / (dimension + 2.0),
                               static_cast<double>(dimension));
    return 0.5 * (lo + hi);
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

void check_theta_window(const ModelParams& prm) {
    const int n = prm.dimension;
    if (n == 1) {
        if (prm.mu != 0.0)
            fail("theta-window: N = 1 runs are unperturbed, mu must be 0 "
                 "(got mu = " + std::to_string(prm.mu) + ")");
        return;
    }
    if (prm.mu == 0.0)
        return; // unperturbed functional, theta never enters
    if (n == 2) {
        if (!(prm.theta > 2.0 && prm.theta < 3.0))
            fail("theta-window: N = 2 requires 2 < theta < 3 (got theta = " +
                 std::to_string(prm.theta) + ")");
        return;
    }
    const double lo = 4.0 * n / (n + 2.0);
    const double hi = std::min((4.0 * n + 4.0) / (n + 2.0), static_cast<double>(n));
    if (!(prm.theta > lo && prm.theta < hi)) {
        std::ostringstream os;
        os << "theta-window: N = " << n << " requires " << lo << " < theta < " << hi
           << " (got theta = " << prm.theta << ")";
        fail(os.str());
    }
}

} // namespace

void validate_params(const ModelParams& prm) {
    const int n = prm.dimension;
    if (n < 1)
        fail("dimension: N must be a positive integer");
    if (!(prm.mass > 0.0))
        fail("mass: prescribed mass a must be positive");
    if (!(prm.mu >= 0.0 && prm.mu <= 1.0))
        fail("mu: perturbation weight must lie in [0, 1]");

    const double p_star = mass_critical_exponent(n);
    const double p_crit = quasilinear_critical_exponent(n);
    if (!(prm.p > 2.0))
        fail("p: exponent must satisfy 2 < p");
    if (!(prm.p < p_crit)) {
        std::ostringstream os;
        os << "(H2): p must stay below the quasilinear critical exponent 2*2^* = "
           << p_crit << " for N = " << n << " (got p = " << prm.p << ")";
        fail(os.str());
    }

    if (is_mass_critical(prm)) {
        // (H3)/(H4); the a > a* window needs a_star and is checked separately.
        check_theta_window(prm);
        return;
    }
    if (prm.p < p_star) {
        std::ostringstream os;
        os << "(H1)-(H4): mass-subcritical p is out of scope, need p >= 4 + 4/N = "
           << p_star << " (got p = " << prm.p << ")";
        fail(os.str());
    }
    // Mass-supercritical regime.
    if (n > 3) {
        std::ostringstream os;
        os << "(H1)/(H2): the mass-supercritical regime covers only N <= 3 "
              "(got N = " << n << ")";
        fail(os.str());
    }
    check_theta_window(prm);
}

void validate_mass_window(const ModelParams& prm, double a_star_value) {
    if (!is_mass_critical(prm))
        return;
    const int n = prm.dimension;
    if (!(prm.mass > a_star_value)) {
        std::ostringstream os;
        os << (n <= 3 ? "(H3)" : "(H4)") << ": mass-critical runs require a > a_* = "
           << a_star_value << " (got a = " << prm.mass << ")";
        fail(os.str());
    }
    if (n >= 4) {
        const double cap =
            std::pow((n - 2.0) / (n - 2.0 - 4.0 / n), 0.5 * n) * a_star_value;
        if (!(prm.mass < cap)) {
            std::ostringstream os;
            os << "(H4): N >= 4 requires a < ((N-2)/(N-2-4/N))^{N/2} a_* = " << cap
               << " (got a = " << prm.mass << ")";
            fail(os.str());
        }
    }
}

void validate_excited(const ModelParams& prm, int node_target) {
    validate_params(prm);
    if (is_mass_critical(prm) || prm.p <= mass_critical_exponent(prm.dimension))
        fail("(H1)'/(H2): excited-state runs require mass-supercritical p > 4 + 4/N");
    if (prm.dimension != 2 && prm.dimension != 3)
        fail("(H1)'/(H2): excited-state runs cover N = 2, 3 only");
    if (node_target < 0 || node_target > 6)
        fail("k: node count must lie in 0..6");
}

} // namespace qnls
