#include "nll/iteration.hpp"

#include <algorithm>
#include <cmath>

#include "nll/field.hpp"
#include "nll/mass.hpp"

namespace nll {

void RegimeInput::validate() const {
    if (n < 1) throw parameter_error("regime input requires n >= 1");
    if (!(s > 0.0 && s < 1.0)) throw parameter_error("regime input requires s in (0,1)");
    if (!(q > 1.0)) throw parameter_error("regime input requires q > 1");
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::subcritical_trivial: return "subcritical-trivial";
        case Regime::critical_trivial: return "critical-trivial";
        case Regime::supercritical_sharpness: return "supercritical-sharpness";
        case Regime::low_dimension_trivial: return "low-dimension-trivial";
    }
    return "unknown";
}

namespace {

IterationTrace run_iteration(double a, double q, double n0, double C0, double Cbar,
                             int max_steps) {
    if (max_steps < 1) throw parameter_error("iteration requires max_steps >= 1");
    if (!(C0 > 0.0) || !(Cbar > 0.0))
        throw parameter_error("iteration constants must be positive");

    IterationTrace trace;
    trace.a = a;
    trace.gamma_fixed_point = a / (1.0 - 1.0 / q);

    trace.gamma.reserve(max_steps + 1);
    trace.constants.reserve(max_steps + 1);
    trace.gamma.push_back(n0);
    trace.constants.push_back(C0);
    for (int m = 0; m < max_steps; ++m) {
        trace.gamma.push_back(a + trace.gamma.back() / q);
        trace.constants.push_back(Cbar * std::pow(trace.constants.back(), 1.0 / q));
    }

    // Closed form gamma_m = gamma_inf + (n0 - gamma_inf) q^{-m}.
    const double ginf = trace.gamma_fixed_point;
    for (std::size_t m = 0; m < trace.gamma.size(); ++m) {
        const double closed = ginf + (n0 - ginf) * std::pow(q, -static_cast<double>(m));
        trace.max_closed_form_gap =
            std::max(trace.max_closed_form_gap, std::abs(closed - trace.gamma[m]));
    }

    if (a < 0.0) {
        int iterated = -1;
        for (std::size_t m = 0; m < trace.gamma.size(); ++m) {
            if (trace.gamma[m] < 0.0) {
                iterated = static_cast<int>(m);
                break;
            }
        }
        // gamma_m < 0  <=>  q^m > (n0 - ginf)/(-ginf).
        const double t = std::log((n0 - ginf) / (-ginf)) / std::log(q);
        int closed = static_cast<int>(std::ceil(t));
        const double boundary = ginf + (n0 - ginf) * std::pow(q, -static_cast<double>(closed));
        if (std::abs(boundary) <= 1e-9) {
            // Tie zone: the iterate at the ceiling index sits numerically on
            // zero; report the closed form and flag it.
            trace.tie_zone = true;
            if (boundary >= 0.0) closed += 1;
            trace.first_negative_index = closed;
        } else {
            if (boundary >= 0.0) closed += 1;
            if (iterated >= 0 && iterated != closed)
                throw consistency_error(
                    "iterated first-negative index " + std::to_string(iterated) +
                    " disagrees with closed form " + std::to_string(closed));
            trace.first_negative_index = closed;
        }
    } else if (a == 0.0) {
        trace.constant_limit = std::pow(Cbar, q / (q - 1.0));
    }
    return trace;
}

}  // namespace

IterationTrace iterate_exponents_with_a(double a, double q, double n0, double C0,
                                        double Cbar, int max_steps) {
    if (!(q > 1.0)) throw parameter_error("iteration requires q > 1");
    IterationTrace trace = run_iteration(a, q, n0, C0, Cbar, max_steps);
    trace.b = 0.0;  // no (n, s) attached in the synthetic variant
    return trace;
}

IterationTrace iterate_exponents(const RegimeInput& input, double C0, double Cbar,
                                 int max_steps) {
    input.validate();
    // a = n - 2s - n/q, written as n - b so a + b lands exactly on n.
    const double b = 2.0 * input.s + input.n / input.q;
    double a = input.n - b;
    if (input.n > 2.0 * input.s) {
        const double qs = input.n / (input.n - 2.0 * input.s);
        if (input.q > qs)
            throw regime_error(
                "iteration is meaningless in the supercritical regime");
        // The critical point is detected by the same exact comparison as
        // classify(); rounding must not move it off zero.
        if (input.q == qs) a = 0.0;
    }
    IterationTrace trace = run_iteration(a, input.q, input.n, C0, Cbar, max_steps);
    trace.b = b;
    return trace;
}

RegimeReport classify(const RegimeInput& input) {
    input.validate();
    RegimeReport report;
    if (input.n <= 2.0 * input.s) {
        report.regime = Regime::low_dimension_trivial;
        report.narrative =
            "n <= 2s: the exponent a = n - 2s - n/q is negative for every q > 1, so "
            "the mass iteration forces S(R) -> 0 and only the trivial nonnegative "
            "supersolution remains.";
        report.trace = iterate_exponents(input, 1.0, 1.0, 200);
        return report;
    }
    const double qs = input.n / (input.n - 2.0 * input.s);
    report.serrin_exponent = qs;
    if (input.q < qs) {
        report.regime = Regime::subcritical_trivial;
        report.narrative =
            "subcritical (q < n/(n-2s)): a < 0, the iterated exponent becomes "
            "negative after finitely many steps and the local mass vanishes; only "
            "u = 0 survives.";
        report.trace = iterate_exponents(input, 1.0, 1.0, 200);
    } else if (input.q == qs) {
        report.regime = Regime::critical_trivial;
        report.narrative =
            "critical (q = n/(n-2s)): a = 0, the iteration gives a uniform L^q "
            "bound and the tail split (J1 + J2) rules out nontrivial "
            "supersolutions.";
        report.trace = iterate_exponents(input, 1.0, 1.0, 200);
    } else {
        report.regime = Regime::supercritical_sharpness;
        report.narrative =
            "supercritical (q > n/(n-2s)): nonexistence fails; the decay profile "
            "c (1+|x|)^{-2s/(q-1)} is a positive supersolution for small c.";
    }
    return report;
}

CriticalSplit critical_tail_split(const ScalarField& u, const Kernel& k, double q,
                                  double rho, double R, const QuadratureConfig& cfg) {
    const int n = k.params.n;
    const double s = k.params.s;
    if (!(n > 2.0 * s)) throw regime_error("critical split requires n > 2s");
    const double qs = n / (n - 2.0 * s);
    if (std::abs(q - qs) > 1e-12)
        throw regime_error("critical split requires q equal to the critical exponent");
    if (!(rho > 0.0 && rho < R))
        throw precondition_error("critical split requires 0 < rho < R");

    const CutoffFamily family = make_cutoff_family(n, R);
    const ScalarField phi = family.phi();

    CriticalSplit split;

    // J1 and the empirical sup of |L_K phi_R| over B_rho.
    double sup_inner = 0.0;
    auto j1_f = [&](const Vec3& x) {
        const double v = u(x);
        if (v < 0.0) throw precondition_error("critical split: u < 0 at a sample");
        return v * std::abs(pv_integrate(phi, k, x, cfg).value);
    };
    split.j1 = integrate_shell(j1_f, n, 0.0, rho, cfg).value;
    for (double r : log_spaced(0.01 * rho, rho, 24)) {
        for (const Vec3& d : sample_directions(n, n == 1 ? 1 : 8)) {
            sup_inner = std::max(sup_inner,
                                 std::abs(pv_integrate(phi, k, r * d, cfg).value));
        }
    }
    auto u_plain = [&](const Vec3& x) { return u(x); };
    const double u_mass_inner = integrate_shell(u_plain, n, 0.0, rho, cfg).value;
    split.j1_bound = sup_inner * u_mass_inner;

    // L^{n/2s} norm of L_K phi_R and the Holder bound for J2.
    split.lp_norm = cutoff_lp_norm(k, family, n / (2.0 * s), cfg);

    auto uq = [&](const Vec3& x) { return std::pow(u(x), q); };
    double ext = 0.0;
    double ref = 0.0;
    for (int kk = 0; kk < 60; ++kk) {
        const double a = std::ldexp(rho, kk);
        const double b = std::ldexp(rho, kk + 1);
        const double ring = integrate_shell(uq, n, a, b, cfg).value;
        ext += ring;
        ref = std::max(ref, std::abs(ext));
        if (std::abs(ring) < 1e-12 * std::max(ref, 1e-300)) break;
    }
    split.exterior_mass = ext;
    split.j2_bound = std::pow(ext, 1.0 / q) * std::pow(split.lp_norm, 2.0 * s / n);
    return split;
}

}  // namespace nll
