#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace nll {

// Point in R^n for n <= 3; unused coordinates stay zero.
struct Vec3 {
    double v[3] = {0.0, 0.0, 0.0};

    Vec3() = default;
    Vec3(double x) : v{x, 0.0, 0.0} {}
    Vec3(double x, double y) : v{x, y, 0.0} {}
    Vec3(double x, double y, double z) : v{x, y, z} {}

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }

    double norm_sq() const { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }
    double norm() const { return std::sqrt(norm_sq()); }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.v[0] + b.v[0], a.v[1] + b.v[1], a.v[2] + b.v[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.v[0] - b.v[0], a.v[1] - b.v[1], a.v[2] - b.v[2]};
}
inline Vec3 operator*(double t, const Vec3& a) {
    return {t * a.v[0], t * a.v[1], t * a.v[2]};
}
inline Vec3 operator-(const Vec3& a) { return {-a.v[0], -a.v[1], -a.v[2]}; }

// Surface measure of the unit sphere S^{n-1}: 2, 2*pi, 4*pi for n = 1, 2, 3.
double sphere_area(int n);

// Deterministic unit directions used for sample grids (not quadrature):
// n=1 -> {+e1}; n=2 -> uniform angles; n=3 -> Fibonacci sphere.
std::vector<Vec3> sample_directions(int n, int count);

// count log-spaced values in [lo, hi], endpoints included.
std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace nll
