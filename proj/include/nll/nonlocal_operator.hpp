#pragma once

#include <string>
#include <vector>

#include "nll/quadrature.hpp"

namespace nll {

// phi_R(x) = eta(x/R)^2 for a smooth bump eta: 1 on B_1, 0 outside B_2.
struct CutoffFamily {
    ScalarField eta;
    double scale = 1.0;  // R

    ScalarField phi() const;  // phi_R, support radius 2R
};

// Radial smooth bump: 1 for |x| <= 1, 0 for |x| >= 2, monotone C^inf
// transition in between.
ScalarField make_bump(int n);

CutoffFamily make_cutoff_family(int n, double scale);

// One evaluation row of a sample sweep.
struct SampleRow {
    double radius = 0.0;     // |x|
    int direction = 0;       // index into the direction set
    double value = 0.0;      // L_K f (x)
    double error = 0.0;      // per-point error estimate
    bool converged = true;
};

// Per-point pv_integrate over a batch of points (parallel, deterministic
// order). Throws the lowest-index failure.
std::vector<QuadResult> apply_operator(const Kernel& k, const ScalarField& f,
                                       const std::vector<Vec3>& points,
                                       const QuadratureConfig& cfg);

// Empirical sups of the two normalized cutoff branches at one scale:
//   inner: sup_{x in B_2R}  |L_K phi_R(x)| R^{2s}
//   outer: sup_{x in B_64R \ B_2R} |L_K phi_R(x)| |x|^{n+2s} / R^n
// Sups over a log-spaced radial x direction sample grid; they are lower
// bounds for the true sups and are labeled empirical.
struct CutoffBoundReport {
    double scale = 0.0;
    double inner_constant = 0.0;
    double outer_constant = 0.0;
    std::vector<SampleRow> inner_samples;
    std::vector<SampleRow> outer_samples;
    std::vector<std::string> failures;  // per-point quadrature failures
};

std::vector<CutoffBoundReport> verify_cutoff_bound(const Kernel& k,
                                                   const CutoffFamily& family,
                                                   const std::vector<double>& scales,
                                                   const QuadratureConfig& cfg);

// \int f (L_K g) dx over the support of f; f, g smooth with compact support
// inside domain_radius.
double pairing(const Kernel& k, const ScalarField& f, const ScalarField& g,
               const QuadratureConfig& cfg, double domain_radius);

// \int u L_K phi_R dx - \int u^q phi_R dx, with the exterior integral summed
// over dyadic annuli plus a declared-decay analytic tail bound. A residual
// >= -error_budget is consistent with u being a weak supersolution against
// this test function.
struct WeakResidual {
    double value = 0.0;
    double error_budget = 0.0;
    double lhs = 0.0;  // \int u L_K phi_R
    double rhs = 0.0;  // \int u^q phi_R
};

WeakResidual weak_supersolution_residual(const Kernel& k, const ScalarField& u,
                                         double q, const CutoffFamily& family,
                                         const QuadratureConfig& cfg);

// \int_{r0 < |x|} |L_K phi_R|^p dx, exterior annuli summed to convergence.
double cutoff_lp_norm(const Kernel& k, const CutoffFamily& family, double p,
                      const QuadratureConfig& cfg);

}  // namespace nll
