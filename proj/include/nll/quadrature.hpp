#pragma once

#include <functional>

#include "nll/errors.hpp"
#include "nll/field.hpp"
#include "nll/kernel.hpp"

namespace nll {

struct QuadratureConfig {
    double r_in = 1e-3;    // singularity split radius
    double R_out = 1e3;    // minimum truncation radius for non-compact fields
    double tol = 1e-6;     // relative tolerance target
    int depth = 30;        // max bisections per initial panel
    int angular = 64;      // angular nodes for n=2 (n=3 uses angular/2 x angular)

    void validate() const;  // throws parameter_error
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // quadrature estimate + tail bound
    double tail_bound = 0.0;      // analytic bound on the untreated far field
    long evaluations = 0;         // field evaluations consumed
};

// Refinement budget ran out before reaching tol; carries the best result.
struct accuracy_error : error {
    QuadResult best;
    accuracy_error(const std::string& what, QuadResult r) : error(what), best(r) {}
};

// 2 u(x) - u(x+z) - u(x-z).
double second_difference(const ScalarField& u, const Vec3& x, const Vec3& z);

// (1/2) PV-free integral of the symmetrized second difference against K:
//   (1/2) \int (2u(x) - u(x+z) - u(x-z)) K(z) dz
// computed as (i) a geometric-panel pass under r_in where the integrand is
// O(|z|^2) K, (ii) adaptive panels up to the effective truncation radius,
// (iii) a far-field piece: the part proportional to u(x) - asymptote is
// integrated in closed form for homogeneous kernels (numerically bracketed
// otherwise), and the remainder is bounded through the decay envelope and
// the upper kernel bound. The bound lands in tail_bound and error_estimate.
QuadResult pv_integrate(const ScalarField& u, const Kernel& k, const Vec3& x,
                        const QuadratureConfig& cfg);

// Direct (singularity-free) integral \int u(x+z) K(z) dz for x strictly
// outside the declared support of u. Independent of the symmetrized path.
QuadResult direct_integral(const ScalarField& u, const Kernel& k, const Vec3& x,
                           const QuadratureConfig& cfg);

// Generic adaptive integration of f over the shell { r0 < |x| < r1 } in R^n.
// f_err, when nonzero, is integrated with the same panels and reported as
// the second component (used to propagate per-point operator error budgets).
struct ShellResult {
    double value = 0.0;
    double error_budget = 0.0;   // integral of f_err plus quadrature estimate
    long evaluations = 0;
};
ShellResult integrate_shell(const std::function<double(const Vec3&)>& f, int n,
                            double r0, double r1, const QuadratureConfig& cfg,
                            const std::function<double(const Vec3&)>& f_err = {});

// Adaptive Gauss-Kronrod on a plain interval.
struct LineResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};
LineResult integrate_line(const std::function<double(double)>& f, double a, double b,
                          double tol, int depth);

}  // namespace nll
