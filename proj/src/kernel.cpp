#include "nll/kernel.hpp"

#include <cmath>

#include "nll/errors.hpp"

namespace nll {

void KernelParams::validate() const {
    if (n < 1 || n > 3)
        throw parameter_error("kernel dimension n must be 1, 2, or 3");
    if (!(s > 0.0 && s < 1.0))
        throw parameter_error("kernel order s must lie in (0,1)");
    if (!(lambda > 0.0) || !(Lambda >= lambda) || !std::isfinite(Lambda))
        throw parameter_error("ellipticity bounds require 0 < lambda <= Lambda < inf");
}

double normalization_constant(int n, double s) {
    KernelParams{n, s, 1.0, 1.0}.validate();
    // c_{n,s} = 2^{2s} s Gamma(n/2 + s) / (pi^{n/2} Gamma(1 - s)),
    // the constant for which the Fourier symbol is |xi|^{2s}.
    return std::pow(2.0, 2.0 * s) * s * std::tgamma(0.5 * n + s) /
           (std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(1.0 - s));
}

Kernel make_fractional_kernel(const KernelParams& params) {
    params.validate();
    const double c = normalization_constant(params.n, params.s);
    const double p = -(params.n + 2.0 * params.s);
    Kernel k;
    k.params = params;
    k.params.lambda = c;
    k.params.Lambda = c;
    k.evaluate = [c, p](const Vec3& z) { return c * std::pow(z.norm(), p); };
    k.label = "fractional";
    k.homogeneous = true;
    return k;
}

Kernel fractional_kernel(int n, double s) {
    return make_fractional_kernel(KernelParams{n, s, 1.0, 1.0});
}

Kernel make_anisotropic_kernel(const KernelParams& params,
                               const std::function<double(const Vec3&)>& direction_profile) {
    params.validate();
    // Probe the profile on a direction grid before accepting it.
    const int probe = params.n == 1 ? 1 : (params.n == 2 ? 360 : 512);
    for (const Vec3& d : sample_directions(params.n, probe)) {
        const double fwd = direction_profile(d);
        const double bwd = direction_profile(-d);
        if (std::abs(fwd - bwd) > 1e-12 * std::max(std::abs(fwd), 1.0)) {
            throw validation_error("direction profile is not even at direction (" +
                                   std::to_string(d[0]) + ", " + std::to_string(d[1]) +
                                   ", " + std::to_string(d[2]) + ")");
        }
        if (fwd < params.lambda - 1e-12 || fwd > params.Lambda + 1e-12) {
            throw validation_error("direction profile leaves [lambda, Lambda] at direction (" +
                                   std::to_string(d[0]) + ", " + std::to_string(d[1]) +
                                   ", " + std::to_string(d[2]) + "): value " +
                                   std::to_string(fwd));
        }
    }
    const double p = -(params.n + 2.0 * params.s);
    Kernel k;
    k.params = params;
    k.evaluate = [direction_profile, p](const Vec3& z) {
        const double r = z.norm();
        return direction_profile((1.0 / r) * z) * std::pow(r, p);
    };
    k.label = "anisotropic";
    k.homogeneous = true;
    return k;
}

KernelValidationReport validate_kernel(const Kernel& k, int sample_count) {
    const int n = k.params.n;
    const double power = -(n + 2.0 * k.params.s);
    int angular = n == 1 ? 1 : (n == 2 ? 36 : 72);
    int radial = std::max(2, sample_count / angular);
    const auto dirs = sample_directions(n, angular);
    const auto radii = log_spaced(1e-3, 1e3, radial);

    KernelValidationReport report;
    for (double r : radii) {
        const double envelope = std::pow(r, power);
        for (const Vec3& d : dirs) {
            const Vec3 z = r * d;
            const double fwd = k(z);
            const double bwd = k(-z);
            ++report.samples;
            const double even = std::abs(fwd - bwd) / std::max(std::abs(fwd), 1e-300);
            const double low = (k.params.lambda * envelope - fwd) /
                               (k.params.lambda * envelope);
            const double high = (fwd - k.params.Lambda * envelope) /
                                (k.params.Lambda * envelope);
            double worst = report.max_evenness_violation +
                           report.max_lower_violation + report.max_upper_violation;
            report.max_evenness_violation = std::max(report.max_evenness_violation, even);
            report.max_lower_violation = std::max(report.max_lower_violation, low);
            report.max_upper_violation = std::max(report.max_upper_violation, high);
            if (report.max_evenness_violation + report.max_lower_violation +
                    report.max_upper_violation > worst) {
                report.worst_point = z;
            }
        }
    }
    report.max_lower_violation = std::max(report.max_lower_violation, 0.0);
    report.max_upper_violation = std::max(report.max_upper_violation, 0.0);
    report.pass = report.max_evenness_violation <= 1e-12 &&
                  report.max_lower_violation <= 1e-12 &&
                  report.max_upper_violation <= 1e-12;
    return report;
}

}  // namespace nll
