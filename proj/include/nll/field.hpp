#pragma once

#include <functional>
#include <optional>
#include <string>

#include "nll/geometry.hpp"

namespace nll {

enum class Smoothness { smooth, c2_local, rough };

// Evaluable candidate function u on R^n with declared far-field metadata.
//
// The decay envelope, when declared, bounds the deviation from the asymptote:
//   |evaluate(x) - asymptote| <= decay_constant * (1+|x|)^{-decay_exponent}.
// A negative decay_exponent declares a growth envelope (used to detect
// tail-space violations). Compactly supported fields set support_radius and
// have asymptote 0.
struct ScalarField {
    int dim = 1;
    std::function<double(const Vec3&)> evaluate;
    Smoothness smoothness = Smoothness::smooth;
    std::optional<double> decay_exponent;   // beta
    double decay_constant = 1.0;            // C_u
    std::optional<double> support_radius;   // evaluate(x) = 0 for |x| > rho
    double asymptote = 0.0;
    std::string label;

    double operator()(const Vec3& x) const { return evaluate(x); }
};

namespace fields {

// u == c everywhere.
ScalarField constant(double c, int n);

// u(x) = cos(xi * x_1).
ScalarField cosine(double xi, int n);

// u(x) = (1 + |x|^2)^{-(n-2s)/2}, the decaying power profile whose image
// under the normalized operator is a constant multiple of u^{(n+2s)/(n-2s)}.
ScalarField bubble(int n, double s);

// u(x) = scale * (1 + |x|)^{-beta}; beta < 0 gives a growing profile.
ScalarField power_decay(double beta, int n, double scale = 1.0);

// Smooth radial bump translated to `center` and dilated by `width`:
// 1 on the ball of radius width about center, 0 outside radius 2*width.
ScalarField bump_at(const Vec3& center, double width, int n);

// u(x) = a*x_1 + b, for second-difference sanity checks.
ScalarField affine(double a, double b, int n);

// u(x) = |x|^2.
ScalarField quadratic(int n);

}  // namespace fields

}  // namespace nll
