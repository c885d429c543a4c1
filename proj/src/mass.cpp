#include "nll/mass.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nll/errors.hpp"

namespace nll {

namespace {

QuadratureConfig mass_config(int grid_resolution) {
    QuadratureConfig cfg;
    cfg.tol = 1e-8;
    cfg.angular = std::max(8, grid_resolution);
    cfg.depth = 40;
    return cfg;
}

}  // namespace

double mass(const ScalarField& u, double q, double R, int grid_resolution) {
    if (!(R > 0.0)) throw precondition_error("mass requires R > 0");
    if (!(q > 1.0)) throw precondition_error("mass requires q > 1");
    const QuadratureConfig cfg = mass_config(grid_resolution);
    auto f = [&](const Vec3& x) {
        const double v = u(x);
        if (v < 0.0) throw precondition_error("mass: u takes a negative sample value");
        return std::pow(v, q);
    };
    return integrate_shell(f, u.dim, 0.0, R, cfg).value;
}

double tail_functional(const ScalarField& u, const KernelParams& k, double R_out) {
    k.validate();
    if (!(R_out > 0.0)) throw precondition_error("tail_functional requires R_out > 0");
    if (!u.support_radius && !u.decay_exponent)
        throw precondition_error("tail_functional requires decay metadata on u");

    const int n = k.n;
    const double s = k.s;
    const double p = n + 2.0 * s;

    double beta = 0.0;
    double c_env = 0.0;
    double c0 = 0.0;
    if (!u.support_radius) {
        beta = *u.decay_exponent;
        c_env = u.decay_constant;
        c0 = u.asymptote;
        if (beta + 2.0 * s <= 0.0)
            throw tail_space_error(
                "declared envelope (1+|x|)^{-beta} with beta + 2s <= 0: u is outside "
                "the tail space L^1_{2s}");
    }

    const QuadratureConfig cfg = mass_config(64);
    auto f = [&](const Vec3& x) { return u(x) * std::pow(1.0 + x.norm(), -p); };

    double total = integrate_shell(f, n, 0.0, R_out, cfg).value;
    if (u.support_radius && R_out >= *u.support_radius) return total;

    // Extend outward until the envelope remainder is negligible.
    const double omega = sphere_area(n);
    double r0 = R_out;
    for (int j = 0; j < 200; ++j) {
        const double remainder =
            omega * (c_env * std::pow(r0, -(beta + 2.0 * s)) / (beta + 2.0 * s) +
                     std::abs(c0) * std::pow(r0, -2.0 * s) / (2.0 * s));
        if (remainder < 1e-9 * std::max(std::abs(total), 1.0)) break;
        total += integrate_shell(f, n, r0, 2.0 * r0, cfg).value;
        r0 *= 2.0;
        if (u.support_radius && r0 >= *u.support_radius) break;
    }
    return total;
}

GrowthReport verify_growth_bound(const MassProfile& profile, int n) {
    GrowthReport report;
    for (std::size_t i = 0; i < profile.radii.size(); ++i) {
        const double r = profile.radii[i];
        const double ratio = profile.masses[i] / std::pow(r, n);
        report.ratios.push_back(ratio);
        if (ratio > report.sup_ratio) {
            report.sup_ratio = ratio;
            report.argmax_radius = r;
        }
    }
    report.attained_at_smallest =
        !profile.radii.empty() && report.argmax_radius == profile.radii.front();
    return report;
}

MassProfile make_mass_profile(const ScalarField& u, double q, const KernelParams& k,
                              const std::vector<double>& radii, int grid_resolution) {
    MassProfile profile;
    profile.q = q;
    profile.radii = radii;
    for (double r : radii) profile.masses.push_back(mass(u, q, r, grid_resolution));
    profile.tail_value = tail_functional(u, k, 1e3);
    return profile;
}

DyadicCheck verify_dyadic_inequality(const ScalarField& u, double q,
                                     const KernelParams& k,
                                     const std::vector<double>& radii, int k_max,
                                     int grid_resolution) {
    k.validate();
    if (!(q > 1.0)) throw precondition_error("dyadic check requires q > 1");
    if (k_max < 1) throw precondition_error("dyadic check requires k_max >= 1");
    for (double r : radii)
        if (!(r >= 1.0)) throw precondition_error("dyadic check requires radii >= 1");

    const int n = k.n;
    const double s = k.s;
    DyadicCheck check;
    // a = n - 2s - n/q computed as n - b so that a + b lands exactly on n.
    check.b = 2.0 * s + n / q;
    check.a = n - check.b;
    check.k_max = k_max;
    check.radii = radii;

    // S-values at dyadic multiples are shared across the k-sums.
    std::map<double, double> cache;
    auto mass_at = [&](double r) {
        auto it = cache.find(r);
        if (it == cache.end())
            it = cache.emplace(r, mass(u, q, r, grid_resolution)).first;
        return it->second;
    };

    // Empirical growth cap sup S/R^n over everything computed, for the
    // series remainder.
    auto growth_cap = [&]() {
        double cap = 0.0;
        for (const auto& [r, m] : cache) cap = std::max(cap, m / std::pow(r, n));
        return cap;
    };

    bool any_nondegenerate = false;
    for (double R : radii) {
        double partial = 0.0;
        for (int kk = 0; kk <= k_max; ++kk)
            partial += std::pow(2.0, -kk * check.b) *
                       std::pow(mass_at(std::ldexp(R, kk + 1)), 1.0 / q);
        const double cap = growth_cap();
        const double remainder = std::pow(cap, 1.0 / q) * std::pow(2.0 * R, n / q) *
                                 std::pow(2.0, -2.0 * s * (k_max + 1)) /
                                 (1.0 - std::pow(2.0, -2.0 * s));
        check.remainder_bounds.push_back(remainder);
        if (partial == 0.0) {
            check.ratios.push_back(0.0);
            check.degenerate.push_back(true);
            continue;
        }
        if (remainder > 0.1 * partial)
            throw precondition_error(
                "dyadic series remainder bound exceeds 10% of the partial sum; "
                "increase k_max");
        any_nondegenerate = true;
        check.degenerate.push_back(false);
        check.ratios.push_back(mass_at(R) / (std::pow(R, check.a) * partial));
    }
    check.all_degenerate = !any_nondegenerate && !radii.empty();
    return check;
}

}  // namespace nll
