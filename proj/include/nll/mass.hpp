#pragma once

#include <vector>

#include "nll/field.hpp"
#include "nll/kernel.hpp"
#include "nll/quadrature.hpp"

namespace nll {

// Sampled local mass S(R) = \int_{B_R} u^q dx with its companion tail value
// T(u) = \int u(x) (1+|x|)^{-n-2s} dx.
struct MassProfile {
    double q = 2.0;
    std::vector<double> radii;   // increasing, >= 1
    std::vector<double> masses;  // S(R), nondecreasing in R
    double tail_value = 0.0;     // T(u)
};

// S(R) via shell quadrature of u^q over B_R. Throws precondition_error on a
// negative u sample.
double mass(const ScalarField& u, double q, double R, int grid_resolution);

// T(u) = \int u (1+|x|)^{-n-2s} dx; quadrature over B_{R_out} extended until
// the declared-decay remainder is negligible. Throws tail_space_error when
// the declared envelope makes the integral divergent.
double tail_functional(const ScalarField& u, const KernelParams& k, double R_out);

struct GrowthReport {
    double sup_ratio = 0.0;       // sup_R S(R)/R^n
    double argmax_radius = 0.0;
    bool attained_at_smallest = false;
    std::vector<double> ratios;   // S(R)/R^n per sampled radius
};

GrowthReport verify_growth_bound(const MassProfile& profile, int n);

// Per-radius comparison of S(R) against the truncated dyadic series
//   R^a sum_{k=0}^{k_max} 2^{-kb} S(2^{k+1} R)^{1/q},
// a = n - 2s - n/q, b = 2s + n/q. The series remainder is bounded through
// the empirical growth cap sup S/R^n; a remainder above 10% of the partial
// sum throws precondition_error (k_max too small).
struct DyadicCheck {
    double a = 0.0;
    double b = 0.0;
    int k_max = 0;
    std::vector<double> radii;
    std::vector<double> ratios;          // S(R) / (R^a * partial series)
    std::vector<double> remainder_bounds;
    std::vector<bool> degenerate;        // 0/0: u vanished on the annuli
    bool all_degenerate = false;
};

DyadicCheck verify_dyadic_inequality(const ScalarField& u, double q,
                                     const KernelParams& k,
                                     const std::vector<double>& radii, int k_max,
                                     int grid_resolution = 64);

MassProfile make_mass_profile(const ScalarField& u, double q, const KernelParams& k,
                              const std::vector<double>& radii,
                              int grid_resolution = 64);

}  // namespace nll
