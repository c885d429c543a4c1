#include "nll/field.hpp"

#include <cmath>

#include "nll/errors.hpp"

namespace nll {
namespace fields {

ScalarField constant(double c, int n) {
    ScalarField f;
    f.dim = n;
    f.evaluate = [c](const Vec3&) { return c; };
    f.smoothness = Smoothness::smooth;
    f.decay_exponent = 0.0;
    f.decay_constant = 0.0;  // u - asymptote == 0
    f.asymptote = c;
    f.label = "constant";
    return f;
}

ScalarField cosine(double xi, int n) {
    ScalarField f;
    f.dim = n;
    f.evaluate = [xi](const Vec3& x) { return std::cos(xi * x[0]); };
    f.smoothness = Smoothness::smooth;
    f.decay_exponent = 0.0;  // bounded, no decay
    f.decay_constant = 1.0;
    f.label = "cosine";
    return f;
}

ScalarField bubble(int n, double s) {
    if (!(n > 2.0 * s))
        throw parameter_error("bubble profile requires n > 2s");
    const double beta = n - 2.0 * s;
    ScalarField f;
    f.dim = n;
    f.evaluate = [beta](const Vec3& x) {
        return std::pow(1.0 + x.norm_sq(), -0.5 * beta);
    };
    f.smoothness = Smoothness::smooth;
    // (1+|x|^2)^{1/2} >= (1+|x|)/sqrt(2), so C_u = 2^{beta/2} works.
    f.decay_exponent = beta;
    f.decay_constant = std::pow(2.0, 0.5 * beta);
    f.label = "bubble";
    return f;
}

ScalarField power_decay(double beta, int n, double scale) {
    ScalarField f;
    f.dim = n;
    f.evaluate = [beta, scale](const Vec3& x) {
        return scale * std::pow(1.0 + x.norm(), -beta);
    };
    f.smoothness = beta == 0.0 ? Smoothness::smooth : Smoothness::c2_local;
    f.decay_exponent = beta;
    f.decay_constant = std::abs(scale);
    f.label = "power_decay";
    return f;
}

namespace {

// C^inf transition: 1 for t <= 1, 0 for t >= 2, monotone in between.
double bump_profile(double t) {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    auto ramp = [](double a) { return a > 0.0 ? std::exp(-1.0 / a) : 0.0; };
    const double up = ramp(2.0 - t);
    return up / (up + ramp(t - 1.0));
}

}  // namespace

ScalarField bump_at(const Vec3& center, double width, int n) {
    if (!(width > 0.0)) throw parameter_error("bump width must be positive");
    ScalarField f;
    f.dim = n;
    f.evaluate = [center, width](const Vec3& x) {
        return bump_profile((x - center).norm() / width);
    };
    f.smoothness = Smoothness::smooth;
    f.support_radius = center.norm() + 2.0 * width;
    f.decay_exponent = 0.0;
    f.decay_constant = 1.0;
    f.label = "bump";
    return f;
}

ScalarField affine(double a, double b, int n) {
    ScalarField f;
    f.dim = n;
    f.evaluate = [a, b](const Vec3& x) { return a * x[0] + b; };
    f.smoothness = Smoothness::smooth;
    f.label = "affine";
    return f;
}

ScalarField quadratic(int n) {
    ScalarField f;
    f.dim = n;
    f.evaluate = [](const Vec3& x) { return x.norm_sq(); };
    f.smoothness = Smoothness::smooth;
    f.label = "quadratic";
    return f;
}

}  // namespace fields
}  // namespace nll
