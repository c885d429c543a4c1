#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nll/nonlocal_operator.hpp"

namespace nll {

struct RegimeInput {
    int n = 1;
    double s = 0.5;
    double q = 2.0;

    void validate() const;  // n >= 1, s in (0,1), q > 1
};

enum class Regime {
    subcritical_trivial,     // n > 2s, 1 < q < n/(n-2s)
    critical_trivial,        // n > 2s, q = n/(n-2s)
    supercritical_sharpness, // n > 2s, q > n/(n-2s)
    low_dimension_trivial    // n <= 2s
};

std::string regime_name(Regime r);

// Exponent/constant recursions gamma_{m+1} = a + gamma_m / q,
// C_{m+1} = Cbar * C_m^{1/q}, from gamma_0 = n, with the closed form
// gamma_m = gamma_inf + (n - gamma_inf) q^{-m} as a built-in cross-check.
struct IterationTrace {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> gamma;      // gamma_0 .. gamma_max
    std::vector<double> constants;  // C_0 .. C_max
    double gamma_fixed_point = 0.0; // a / (1 - 1/q)
    std::optional<int> first_negative_index;  // M, when a < 0
    bool tie_zone = false;          // iterated gamma_M within 1e-9 of zero
    std::optional<double> constant_limit;     // Cbar^{q/(q-1)}, when a = 0
    double max_closed_form_gap = 0.0;
};

struct RegimeReport {
    Regime regime = Regime::subcritical_trivial;
    std::optional<double> serrin_exponent;  // q_S = n/(n-2s), when n > 2s
    std::optional<IterationTrace> trace;    // attached for trivial regimes
    std::string narrative;
};

RegimeReport classify(const RegimeInput& input);

// Throws regime_error on supercritical input; throws consistency_error if the
// iterated and closed-form first-negative indices disagree outside the tie zone.
IterationTrace iterate_exponents(const RegimeInput& input, double C0, double Cbar,
                                 int max_steps);

// Variant with the exponent a overridden (synthetic fixed-point checks).
IterationTrace iterate_exponents_with_a(double a, double q, double n0, double C0,
                                        double Cbar, int max_steps);

// Critical-case split of \int u |L_K phi_R| at scale R into the near part
// J1 over B_rho and a Holder bound for the far part:
//   J1 <= C R^{-2s} \int_{B_rho} u,   J2 <= (\int_{B_rho^c} u^q)^{1/q} * Lp^{2s/n}
// with Lp = (\int |L_K phi_R|^{n/2s})^{2s/n}.
struct CriticalSplit {
    double j1 = 0.0;
    double j1_bound = 0.0;       // (empirical sup |L phi_R| on B_rho) * \int_{B_rho} u
    double j2_bound = 0.0;
    double lp_norm = 0.0;        // \int |L_K phi_R|^{n/2s} dx
    double exterior_mass = 0.0;  // \int_{B_rho^c} u^q
};

// Requires q to be the critical exponent within 1e-12 and 0 < rho < R.
CriticalSplit critical_tail_split(const ScalarField& u, const Kernel& k, double q,
                                  double rho, double R, const QuadratureConfig& cfg);

}  // namespace nll
