#include "nll/geometry.hpp"

#include <numbers>

#include "nll/errors.hpp"

namespace nll {

double sphere_area(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
        default: throw parameter_error("sphere_area: dimension must be 1, 2, or 3");
    }
}

std::vector<Vec3> sample_directions(int n, int count) {
    std::vector<Vec3> dirs;
    if (n == 1) {
        dirs.push_back(Vec3{1.0});
        return dirs;
    }
    dirs.reserve(static_cast<std::size_t>(count));
    if (n == 2) {
        for (int j = 0; j < count; ++j) {
            double phi = 2.0 * std::numbers::pi * (j + 0.5) / count;
            dirs.push_back(Vec3{std::cos(phi), std::sin(phi)});
        }
        return dirs;
    }
    if (n == 3) {
        // Fibonacci sphere: near-uniform and fully deterministic.
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < count; ++j) {
            double y = 1.0 - 2.0 * (j + 0.5) / count;
            double r = std::sqrt(std::max(0.0, 1.0 - y * y));
            double phi = golden * j;
            dirs.push_back(Vec3{r * std::cos(phi), y, r * std::sin(phi)});
        }
        return dirs;
    }
    throw parameter_error("sample_directions: dimension must be 1, 2, or 3");
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    if (count <= 0) return out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    const double la = std::log(lo);
    const double lb = std::log(hi);
    for (int i = 0; i < count; ++i) {
        out.push_back(std::exp(la + (lb - la) * i / (count - 1)));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace nll
