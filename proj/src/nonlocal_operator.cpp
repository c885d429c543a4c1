#include "nll/nonlocal_operator.hpp"

#include <algorithm>
#include <cmath>

#include "nll/parallel.hpp"

namespace nll {

namespace {

double bump_profile(double t) {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    auto ramp = [](double a) { return a > 0.0 ? std::exp(-1.0 / a) : 0.0; };
    const double up = ramp(2.0 - t);
    return up / (up + ramp(t - 1.0));
}

}  // namespace

ScalarField make_bump(int n) {
    if (n < 1 || n > 3) throw parameter_error("make_bump: dimension must be 1, 2, or 3");
    ScalarField f;
    f.dim = n;
    f.evaluate = [](const Vec3& x) { return bump_profile(x.norm()); };
    f.smoothness = Smoothness::smooth;
    f.support_radius = 2.0;
    f.decay_exponent = 0.0;
    f.decay_constant = 1.0;
    f.label = "bump";
    return f;
}

ScalarField CutoffFamily::phi() const {
    const double R = scale;
    const ScalarField base = eta;
    ScalarField f;
    f.dim = base.dim;
    f.evaluate = [base, R](const Vec3& x) {
        const double e = base((1.0 / R) * x);
        return e * e;
    };
    f.smoothness = Smoothness::smooth;
    f.support_radius = 2.0 * R;
    f.decay_exponent = 0.0;
    f.decay_constant = 1.0;
    f.label = "phi_R";
    return f;
}

CutoffFamily make_cutoff_family(int n, double scale) {
    if (!(scale > 0.0)) throw parameter_error("cutoff scale must be positive");
    return CutoffFamily{make_bump(n), scale};
}

std::vector<QuadResult> apply_operator(const Kernel& k, const ScalarField& f,
                                       const std::vector<Vec3>& points,
                                       const QuadratureConfig& cfg) {
    std::vector<QuadResult> results(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        results[i] = pv_integrate(f, k, points[i], cfg);
    });
    return results;
}

namespace {

struct SweepOutcome {
    std::vector<SampleRow> rows;
    double sup_normalized = 0.0;
    std::vector<std::string> failures;
};

// Evaluates |L_K f| on radii x directions and tracks sup of |value| * norm(r).
SweepOutcome sweep(const Kernel& k, const ScalarField& f,
                   const std::vector<double>& radii, const std::vector<Vec3>& dirs,
                   const QuadratureConfig& cfg,
                   const std::function<double(double)>& normalizer) {
    const std::size_t count = radii.size() * dirs.size();
    SweepOutcome out;
    out.rows.resize(count);
    std::vector<std::string> fail(count);
    parallel_for(count, [&](std::size_t i) {
        const std::size_t ir = i / dirs.size();
        const int id = static_cast<int>(i % dirs.size());
        const Vec3 x = radii[ir] * dirs[id];
        SampleRow row;
        row.radius = radii[ir];
        row.direction = id;
        try {
            QuadResult q = pv_integrate(f, k, x, cfg);
            row.value = q.value;
            row.error = q.error_estimate;
        } catch (const accuracy_error& e) {
            row.value = e.best.value;
            row.error = e.best.error_estimate;
            row.converged = false;
            fail[i] = "r=" + std::to_string(radii[ir]) + " dir=" + std::to_string(id) +
                      ": " + e.what();
        }
        out.rows[i] = row;
    });
    for (std::size_t i = 0; i < count; ++i) {
        if (!fail[i].empty()) out.failures.push_back(fail[i]);
        out.sup_normalized = std::max(
            out.sup_normalized, std::abs(out.rows[i].value) * normalizer(out.rows[i].radius));
    }
    return out;
}

}  // namespace

std::vector<CutoffBoundReport> verify_cutoff_bound(const Kernel& k,
                                                   const CutoffFamily& family,
                                                   const std::vector<double>& scales,
                                                   const QuadratureConfig& cfg) {
    const int n = k.params.n;
    const double s = k.params.s;
    const int dir_count = n == 1 ? 1 : (n == 2 ? 32 : 96);
    const auto dirs = sample_directions(n, dir_count);

    std::vector<CutoffBoundReport> reports;
    reports.reserve(scales.size());
    for (double R : scales) {
        if (!(R > 0.0)) throw precondition_error("cutoff scales must be positive");
        CutoffFamily fam{family.eta, R};
        const ScalarField phi = fam.phi();

        CutoffBoundReport report;
        report.scale = R;

        const auto inner_radii = log_spaced(0.002 * 2.0 * R, 0.999 * 2.0 * R, 64);
        SweepOutcome inner = sweep(k, phi, inner_radii, dirs, cfg, [&](double) {
            return std::pow(R, 2.0 * s);
        });
        report.inner_constant = inner.sup_normalized;
        report.inner_samples = std::move(inner.rows);

        const auto outer_radii = log_spaced(1.001 * 2.0 * R, 64.0 * R, 64);
        SweepOutcome outer = sweep(k, phi, outer_radii, dirs, cfg, [&](double r) {
            return std::pow(r, n + 2.0 * s) / std::pow(R, n);
        });
        report.outer_constant = outer.sup_normalized;
        report.outer_samples = std::move(outer.rows);

        report.failures = std::move(inner.failures);
        report.failures.insert(report.failures.end(), outer.failures.begin(),
                               outer.failures.end());
        reports.push_back(std::move(report));
    }
    return reports;
}

double pairing(const Kernel& k, const ScalarField& f, const ScalarField& g,
               const QuadratureConfig& cfg, double domain_radius) {
    if (!f.support_radius || !g.support_radius)
        throw precondition_error("pairing requires compactly supported fields");
    if (*f.support_radius > domain_radius || *g.support_radius > domain_radius)
        throw precondition_error("pairing: supports must lie inside the domain radius");
    auto integrand = [&](const Vec3& x) {
        const double fx = f(x);
        if (fx == 0.0) return 0.0;
        return fx * pv_integrate(g, k, x, cfg).value;
    };
    return integrate_shell(integrand, k.params.n, 0.0, *f.support_radius, cfg).value;
}

WeakResidual weak_supersolution_residual(const Kernel& k, const ScalarField& u,
                                         double q, const CutoffFamily& family,
                                         const QuadratureConfig& cfg) {
    if (!(q > 1.0)) throw precondition_error("weak residual requires q > 1");
    const int n = k.params.n;
    const double s = k.params.s;
    const double R = family.scale;
    const ScalarField phi = CutoffFamily{family.eta, R}.phi();

    if (!u.support_radius) {
        if (!u.decay_exponent)
            throw precondition_error("weak residual requires decay metadata on u");
        if (*u.decay_exponent + 2.0 * s <= 0.0)
            throw tail_space_error("declared growth places u outside the tail space");
    }

    auto check_sign = [&](const Vec3& p) {
        const double v = u(p);
        if (v < 0.0)
            throw precondition_error("weak residual: u takes a negative sample value");
        return v;
    };

    // \int u L_K phi_R over B_2R, with the per-point operator error folded
    // into the budget.
    auto lhs_f = [&](const Vec3& p) { return check_sign(p) * pv_integrate(phi, k, p, cfg).value; };
    auto lhs_e = [&](const Vec3& p) { return u(p) * pv_integrate(phi, k, p, cfg).error_estimate; };
    ShellResult inner = integrate_shell(lhs_f, n, 0.0, 2.0 * R, cfg, lhs_e);

    double lhs = inner.value;
    double budget = inner.error_budget;

    // Dyadic annuli A_k = B_{2^{k+1} R} \ B_{2^k R}, k = 1..40; the operator
    // integrand is cheap there (x outside the support of phi_R).
    const int k_max = 40;
    double exterior_scale = std::abs(inner.value);
    double last_radius = 2.0 * R;
    for (int kk = 1; kk <= k_max; ++kk) {
        const double a = std::ldexp(R, kk);
        const double b = std::ldexp(R, kk + 1);
        ShellResult ring = integrate_shell(lhs_f, n, a, b, cfg, lhs_e);
        lhs += ring.value;
        budget += ring.error_budget;
        exterior_scale = std::max(exterior_scale, std::abs(lhs));
        last_radius = b;
        if (std::abs(ring.value) < 1e-14 * std::max(exterior_scale, 1e-300)) break;
    }

    // Beyond the last annulus: |L_K phi_R| <= Lambda |B_2R| (|x|/2)^{-n-2s}
    // and u is controlled by its envelope.
    {
        const double omega = sphere_area(n);
        const double ball = omega / n * std::pow(2.0 * R, n);
        const double kernel_cap =
            k.params.Lambda * ball * std::pow(2.0, n + 2.0 * s);
        double env_const = 0.0;
        double env_beta = 0.0;
        if (u.support_radius) {
            env_const = 0.0;  // u vanishes far out
        } else {
            env_const = u.decay_constant;
            env_beta = *u.decay_exponent;
        }
        double tail = env_const * kernel_cap * omega *
                      std::pow(last_radius, -(env_beta + 2.0 * s)) /
                      std::max(env_beta + 2.0 * s, 1e-12);
        if (!u.support_radius && u.asymptote != 0.0)
            tail += std::abs(u.asymptote) * kernel_cap * omega *
                    std::pow(last_radius, -2.0 * s) / (2.0 * s);
        budget += tail;
    }

    // \int u^q phi_R over B_2R (no operator, plain quadrature).
    auto rhs_f = [&](const Vec3& p) {
        const double v = check_sign(p);
        return std::pow(v, q) * phi(p);
    };
    ShellResult rhs = integrate_shell(rhs_f, n, 0.0, 2.0 * R, cfg);
    budget += rhs.error_budget;

    WeakResidual res;
    res.lhs = lhs;
    res.rhs = rhs.value;
    res.value = lhs - rhs.value;
    res.error_budget = budget;
    return res;
}

double cutoff_lp_norm(const Kernel& k, const CutoffFamily& family, double p,
                      const QuadratureConfig& cfg) {
    if (!(p >= 1.0)) throw precondition_error("cutoff_lp_norm requires p >= 1");
    const int n = k.params.n;
    const double R = family.scale;
    const ScalarField phi = CutoffFamily{family.eta, R}.phi();
    auto f = [&](const Vec3& x) {
        return std::pow(std::abs(pv_integrate(phi, k, x, cfg).value), p);
    };
    ShellResult inner = integrate_shell(f, n, 0.0, 2.0 * R, cfg);
    double total = inner.value;
    double scale_ref = std::abs(total);
    for (int kk = 1; kk <= 60; ++kk) {
        const double a = std::ldexp(2.0 * R, kk - 1);
        const double b = std::ldexp(2.0 * R, kk);
        ShellResult ring = integrate_shell(f, n, a, b, cfg);
        total += ring.value;
        scale_ref = std::max(scale_ref, std::abs(total));
        if (std::abs(ring.value) < 1e-12 * std::max(scale_ref, 1e-300)) break;
    }
    return total;
}

}  // namespace nll
