#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nll/geometry.hpp"

namespace nll {

struct KernelParams {
    int n = 1;             // space dimension
    double s = 0.5;        // order, in (0,1)
    double lambda = 1.0;   // lower ellipticity bound
    double Lambda = 1.0;   // upper ellipticity bound

    // Throws parameter_error unless n >= 1, 0 < s < 1, 0 < lambda <= Lambda.
    void validate() const;
};

// Jump kernel K : R^n \ {0} -> (0, inf), even and sandwiched between
// lambda |z|^{-n-2s} and Lambda |z|^{-n-2s}. Immutable after construction;
// safe to evaluate concurrently.
struct Kernel {
    KernelParams params;
    std::function<double(const Vec3&)> evaluate;
    std::string label;
    // K(t z) = t^{-n-2s} K(z) exactly. Enables a closed-form far-field
    // integral; custom tabulated kernels leave this false.
    bool homogeneous = false;

    double operator()(const Vec3& z) const { return evaluate(z); }
};

// Normalization c_{n,s} for which c_{n,s}|z|^{-n-2s} has Fourier symbol |xi|^{2s}.
double normalization_constant(int n, double s);

// K(z) = c_{n,s} |z|^{-n-2s}; result params carry lambda = Lambda = c_{n,s}.
Kernel make_fractional_kernel(const KernelParams& params);
Kernel fractional_kernel(int n, double s);

// K(z) = a(z/|z|) |z|^{-n-2s} with an even direction profile a satisfying
// lambda <= a <= Lambda. The profile is checked on a direction grid; a
// violation throws validation_error naming the offending direction.
Kernel make_anisotropic_kernel(const KernelParams& params,
                               const std::function<double(const Vec3&)>& direction_profile);

struct KernelValidationReport {
    double max_evenness_violation = 0.0;  // relative |K(z)-K(-z)| / K(z)
    double max_lower_violation = 0.0;     // relative shortfall below lambda|z|^{-n-2s}
    double max_upper_violation = 0.0;     // relative excess above Lambda|z|^{-n-2s}
    Vec3 worst_point{};
    long samples = 0;
    bool pass = false;
};

// Samples K on a log-spaced radial x uniform angular grid and reports the
// worst relative violations. Passes iff all violations <= 1e-12.
KernelValidationReport validate_kernel(const Kernel& k, int sample_count);

}  // namespace nll
