#pragma once

#include <vector>

#include "nll/nonlocal_operator.hpp"

namespace nll {

// Supercritical decay profile u(x) = c (1+|x|)^{-alpha}, alpha = 2s/(q-1).
// Only admitted when n > 2s and q > n/(n-2s), which makes alpha < n - 2s.
struct SharpnessProfile {
    int n = 1;
    double s = 0.25;
    double q = 4.0;
    double c = 1.0;
    double alpha = 0.0;
    ScalarField field;
};

SharpnessProfile make_sharpness_profile(int n, double s, double q, double c);

struct MarginRow {
    double radius = 0.0;
    double operator_value = 0.0;  // L_K u at |x| = r
    double reaction_value = 0.0;  // u(x)^q
    double margin = 0.0;          // operator_value - reaction_value
    double error_budget = 0.0;
    bool converged = true;
};

// margin(r) = L_K u(x_r) - u(x_r)^q at points |x_r| = r. A failed quadrature
// at a radius is recorded with converged=false and skipped by certification.
std::vector<MarginRow> pointwise_margin(const SharpnessProfile& profile,
                                        const Kernel& k,
                                        const std::vector<double>& radii,
                                        const QuadratureConfig& cfg);

// Largest scaling (times safety) for which every sampled margin is
// nonnegative: c = safety * min_r [L(r)/u0(r)^q]^{1/(q-1)} for the unit
// profile u0. Throws precondition_error if L(r) <= 0 at some radius.
double calibrate_c(int n, double s, double q, const Kernel& k,
                   const std::vector<double>& radii, double safety,
                   const QuadratureConfig& cfg);

// {0} followed by `count` log-spaced radii in [lo, hi].
std::vector<double> default_sharpness_radii(double lo = 0.1, double hi = 100.0,
                                            int count = 24);

}  // namespace nll
