#include "nll/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <vector>

namespace nll {

void QuadratureConfig::validate() const {
    if (!(r_in > 0.0) || !(R_out > r_in))
        throw parameter_error("quadrature requires 0 < r_in < R_out");
    if (!(tol > 0.0 && tol < 1.0))
        throw parameter_error("quadrature tol must lie in (0,1)");
    if (depth < 1) throw parameter_error("quadrature depth must be >= 1");
    if (angular < 2) throw parameter_error("angular resolution must be >= 2");
}

double second_difference(const ScalarField& u, const Vec3& x, const Vec3& z) {
    return 2.0 * u(x) - u(x + z) - u(x - z);
}

namespace {

// ---------------------------------------------------------------------------
// Gauss-Legendre and Gauss-Kronrod rules
// ---------------------------------------------------------------------------

struct GLRule {
    std::vector<double> nodes;    // on [-1,1]
    std::vector<double> weights;
};

GLRule compute_gauss_legendre(int m) {
    GLRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[m - 1 - i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[m - 1 - i] = rule.weights[i];
    }
    return rule;
}

const GLRule& gauss_legendre(int m) {
    thread_local std::map<int, GLRule> cache;
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, compute_gauss_legendre(m)).first;
    return it->second;
}

// 15-point Kronrod extension of 7-point Gauss.
constexpr double kGK15Nodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr double kGK15Weights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

// Gauss-7 weights at Kronrod node indices 1,3,5,7,9,11,13.
constexpr double kG7Weights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct PanelEstimate {
    double value = 0.0;
    double error = 0.0;
    double companion = 0.0;  // same-panel integral of the companion integrand
};

template <typename F>
PanelEstimate gk15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc15 = 0.0, acc7 = 0.0, comp = 0.0;
    for (int i = 0; i < 15; ++i) {
        auto [fv, cv] = f(mid + half * kGK15Nodes[i]);
        acc15 += kGK15Weights[i] * fv;
        comp += kGK15Weights[i] * cv;
        if (i % 2 == 1) acc7 += kG7Weights[i / 2] * fv;
    }
    PanelEstimate est;
    est.value = half * acc15;
    est.companion = half * comp;
    const double diff = half * std::abs(acc15 - acc7);
    // Standard QUADPACK-style sharpened estimate.
    est.error = diff;
    if (diff > 0.0 && std::abs(est.value) > 0.0) {
        double scaled = std::pow(200.0 * diff / std::max(std::abs(est.value), diff), 1.5);
        est.error = std::min(diff, std::abs(est.value) * std::min(1.0, scaled));
        est.error = std::max(est.error, diff * 1e-6);
    }
    return est;
}

struct Panel {
    double a = 0.0, b = 0.0;
    PanelEstimate est;
    int depth = 0;
};

struct AdaptiveOutcome {
    double value = 0.0;
    double error = 0.0;
    double companion = 0.0;
    bool converged = true;
};

// Adaptive refinement over [lo, hi] starting from factor-2 geometric panels.
// Splits use the geometric mean while panels stay wide relative to their
// position.
template <typename F>
AdaptiveOutcome adapt_geometric(const F& f, double lo, double hi, double tol,
                                int max_depth) {
    AdaptiveOutcome out;
    if (!(hi > lo)) return out;

    std::vector<Panel> panels;
    double a = lo;
    while (a < hi) {
        double b = std::min(hi, a * 2.0);
        if (b <= a) b = hi;
        Panel p{a, b, gk15(f, a, b), 0};
        panels.push_back(p);
        a = b;
    }

    auto worst = [&panels]() {
        std::size_t w = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].est.error > panels[w].est.error) w = i;
        return w;
    };

    const std::size_t panel_cap = 20000;
    for (;;) {
        double total = 0.0, err = 0.0, mag = 0.0;
        for (const Panel& p : panels) {
            total += p.est.value;
            err += p.est.error;
            mag += std::abs(p.est.value);
        }
        // Under heavy cancellation the achievable target is relative to the
        // integrand mass, not the (near-zero) total.
        const double thresh = 0.5 * tol * std::max(std::abs(total), 1e-3 * mag);
        if (err <= thresh) break;
        std::size_t w = worst();
        Panel& p = panels[w];
        if (p.depth >= max_depth || panels.size() >= panel_cap) {
            out.converged = false;
            break;
        }
        double split = (p.b / p.a > 1.05) ? std::sqrt(p.a * p.b) : 0.5 * (p.a + p.b);
        Panel left{p.a, split, gk15(f, p.a, split), p.depth + 1};
        Panel right{split, p.b, gk15(f, split, p.b), p.depth + 1};
        panels[w] = left;
        panels.push_back(right);
    }
    for (const Panel& p : panels) {
        out.value += p.est.value;
        out.error += p.est.error;
        out.companion += p.est.companion;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Angular integration over S^{n-1}
// ---------------------------------------------------------------------------

// Full-sphere rule: sum of w_j f(theta_j) approximating the surface integral.
template <typename F>
double sphere_integral(int n, int angular, const F& f) {
    if (n == 1) return f(Vec3{1.0}) + f(Vec3{-1.0});
    if (n == 2) {
        const double w = 2.0 * std::numbers::pi / angular;
        double acc = 0.0;
        for (int j = 0; j < angular; ++j) {
            double phi = w * (j + 0.5);
            acc += f(Vec3{std::cos(phi), std::sin(phi)});
        }
        return acc * w;
    }
    // n == 3: Gauss-Legendre in cos(theta) x uniform azimuth.
    const int mp = std::max(4, angular / 2);
    const int ma = angular;
    const GLRule& gl = gauss_legendre(mp);
    const double wa = 2.0 * std::numbers::pi / ma;
    double acc = 0.0;
    for (int i = 0; i < mp; ++i) {
        const double ct = gl.nodes[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        double ring = 0.0;
        for (int j = 0; j < ma; ++j) {
            double phi = wa * (j + 0.5);
            ring += f(Vec3{st * std::cos(phi), st * std::sin(phi), ct});
        }
        acc += gl.weights[i] * ring * wa;
    }
    return acc;
}

// Orthonormal pair completing `axis` to a frame (n = 3).
void make_frame(const Vec3& axis, Vec3& e1, Vec3& e2) {
    Vec3 h = std::abs(axis[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const double d = h[0] * axis[0] + h[1] * axis[1] + h[2] * axis[2];
    e1 = h - d * axis;
    e1 = (1.0 / e1.norm()) * e1;
    e2 = Vec3{axis[1] * e1[2] - axis[2] * e1[1], axis[2] * e1[0] - axis[0] * e1[2],
              axis[0] * e1[1] - axis[1] * e1[0]};
}

// Integral over the spherical cap { theta : angle(theta, axis) <= w }.
// Adaptively refined: compactly supported sections have C^inf joins where
// fixed Gauss rules stall around 1e-5 relative.
template <typename F>
double cap_integral(int n, const Vec3& axis, double w, const F& f) {
    if (n == 2) {
        const double phic = std::atan2(axis[1], axis[0]);
        auto g = [&](double phi) { return f(Vec3{std::cos(phi), std::sin(phi)}); };
        return integrate_line(g, phic - w, phic + w, 1e-9, 14).value;
    }
    // n == 3: adaptive polar sweep in t = cos(psi) over [cos w, 1], uniform
    // azimuth rings about the axis.
    Vec3 e1, e2;
    make_frame(axis, e1, e2);
    const int ma = 32;
    const double wa = 2.0 * std::numbers::pi / ma;
    const double t0 = std::cos(w);
    auto ring = [&](double t) {
        const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
        double acc = 0.0;
        for (int j = 0; j < ma; ++j) {
            double chi = wa * (j + 0.5);
            Vec3 theta = t * axis + (st * std::cos(chi)) * e1 + (st * std::sin(chi)) * e2;
            acc += f(theta);
        }
        return acc * wa;
    };
    return integrate_line(ring, t0, 1.0, 1e-9, 12).value;
}

// ---------------------------------------------------------------------------
// Symmetrized shell integrand
// ---------------------------------------------------------------------------

enum class Window { empty, narrow, wide };

struct SupportWindow {
    Window kind = Window::wide;
    double half_angle = std::numbers::pi;
};

// Angular window, seen from x at hop distance r, of the origin ball of
// radius rho (the declared support of u).
SupportWindow support_window(double xn, double r, double rho) {
    SupportWindow win;
    if (xn < 1e-300) {
        win.kind = r <= rho ? Window::wide : Window::empty;
        return win;
    }
    const double c = (xn * xn + r * r - rho * rho) / (2.0 * xn * r);
    if (c >= 1.0) {
        win.kind = Window::empty;
        return win;
    }
    if (c <= -1.0) {
        win.kind = Window::wide;
        return win;
    }
    win.half_angle = std::acos(c);
    win.kind = win.half_angle < 0.25 * std::numbers::pi ? Window::narrow : Window::wide;
    return win;
}

// g(r) = r^{n-1} \int_{S^{n-1}} (2u(x) - u(x+r th) - u(x-r th)) K(r th) dsigma.
// With a declared support the u terms live on a cap around -x/|x|; the
// narrow-window path integrates that cap with a dedicated rule and handles
// the 2u(x) part through the kernel's angular integral.
struct SymmetrizedShell {
    const ScalarField& u;
    const Kernel& k;
    Vec3 x;
    double ux;
    double xn;
    int angular;
    double kernel_angular_unit;  // \int_S K(theta) dsigma, homogeneous kernels
    long* evals;

    double kbar(double r) const {
        if (k.homogeneous)
            return kernel_angular_unit * std::pow(r, -(k.params.n + 2.0 * k.params.s));
        return sphere_integral(k.params.n, angular,
                               [&](const Vec3& th) { return k(r * th); });
    }

    double operator()(double r) const {
        const int n = k.params.n;
        const double rpow = n == 1 ? 1.0 : (n == 2 ? r : r * r);
        if (u.support_radius && n >= 2) {
            const SupportWindow win = support_window(xn, r, *u.support_radius);
            if (win.kind == Window::empty) return rpow * 2.0 * ux * kbar(r);
            if (win.kind == Window::narrow) {
                const Vec3 axis = (-1.0 / xn) * x;
                const double cap = cap_integral(n, axis, win.half_angle, [&](const Vec3& th) {
                    ++*evals;
                    return u(x + r * th) * k(r * th);
                });
                return rpow * (2.0 * ux * kbar(r) - 2.0 * cap);
            }
        }
        if (u.support_radius && n == 1) {
            // 1D: the two-point rule is already exact; only short-circuit the
            // all-zero case.
            if (ux == 0.0 && std::abs(xn - r) > *u.support_radius &&
                std::abs(xn + r) > *u.support_radius)
                return 0.0;
        }
        const double sum = sphere_integral(n, angular, [&](const Vec3& th) {
            *evals += 2;
            const Vec3 dz = r * th;
            return (2.0 * ux - u(x + dz) - u(x - dz)) * k(dz);
        });
        return rpow * sum;
    }
};

double tail_exponent_integral(double R, double p) {
    // \int_R^inf r^{-1-p} dr = R^{-p} / p, for p > 0.
    return std::pow(R, -p) / p;
}

}  // namespace

// ---------------------------------------------------------------------------
// pv_integrate
// ---------------------------------------------------------------------------

QuadResult pv_integrate(const ScalarField& u, const Kernel& k, const Vec3& x,
                        const QuadratureConfig& cfg) {
    cfg.validate();
    const int n = k.params.n;
    const double s = k.params.s;
    if (u.dim != n)
        throw precondition_error("field dimension does not match kernel dimension");

    long evals = 1;
    const double ux = u(x);
    const double xn = x.norm();

    const bool compact = u.support_radius.has_value();
    if (!compact && !u.decay_exponent.has_value())
        throw precondition_error(
            "field declares neither support nor decay; the far field cannot be bounded");

    double beta = 0.0;
    if (!compact) {
        beta = *u.decay_exponent;
        if (beta + 2.0 * s <= 0.0)
            throw tail_space_error(
                "declared growth envelope makes the nonlocal integral divergent");
    }

    double R_eff;
    if (compact)
        R_eff = std::max(xn + *u.support_radius, 2.0 * cfg.r_in);
    else
        R_eff = std::max({cfg.R_out, 2.0 * xn, 2.0 * cfg.r_in});

    SymmetrizedShell shell{u, k, x, ux, xn, cfg.angular, 0.0, &evals};
    if (k.homogeneous)
        shell.kernel_angular_unit =
            sphere_integral(n, cfg.angular, [&](const Vec3& th) { return k(th); });

    // (ii) adaptive panels on [r_in, R_eff]. When x sits outside the support
    // the integrand lives on the band |z| in [|x|-rho, |x|+rho] only;
    // integrating the band directly keeps its edges on panel boundaries (a
    // narrow far band would otherwise vanish between the nodes of a wide
    // panel).
    double mid_lo = cfg.r_in, mid_hi = R_eff;
    bool inner_is_zero = false;
    if (compact && ux == 0.0) {
        const double rho = *u.support_radius;
        mid_lo = std::max(cfg.r_in, xn - rho);
        mid_hi = std::min(R_eff, xn + rho);
        inner_is_zero = xn - rho >= cfg.r_in;
    }
    auto integrand = [&](double r) { return std::pair<double, double>(shell(r), 0.0); };
    AdaptiveOutcome middle =
        adapt_geometric(integrand, mid_lo, mid_hi, cfg.tol, cfg.depth);

    // (i) geometric panels below r_in; the integrand is O(r^2) K there, so
    // the panel sums decay geometrically and the leftover is extrapolated.
    // The second difference cancels to rounding noise of size eps |u(x)|,
    // which the kernel blows up like r^{-1-2s}; panels are abandoned once
    // they sink to that floor (the floor scales linearly with u, so scaled
    // fields refine identically).
    double inner_value = 0.0, inner_error = 0.0;
    if (!inner_is_zero) {
        const GLRule& gl = gauss_legendre(8);
        const double eps_inner = 0.02 * cfg.tol * std::abs(middle.value);
        const double noise_unit = 16.0 * std::numeric_limits<double>::epsilon() *
                                  std::abs(ux) * k.params.Lambda * sphere_area(n);
        double hi = cfg.r_in;
        double prev = 0.0;
        double last = 0.0;
        double noise_sum = 0.0;
        bool have_prev = false;
        for (int j = 0; j < 64; ++j) {
            const double lo = 0.5 * hi;
            const double mid = 0.5 * (lo + hi);
            const double half = 0.5 * (hi - lo);
            double p = 0.0;
            for (int i = 0; i < 8; ++i)
                p += gl.weights[i] * shell(mid + half * gl.nodes[i]);
            p *= half;
            const double noise_p =
                noise_unit * std::pow(mid, -1.0 - 2.0 * s) * (hi - lo);
            const double floor_p = std::max(eps_inner, 4.0 * noise_p);
            inner_value += p;
            if (p != 0.0) noise_sum += noise_p;
            if (have_prev && std::abs(p) <= floor_p && std::abs(prev) <= floor_p) {
                last = p;
                hi = lo;
                break;
            }
            prev = p;
            last = p;
            have_prev = true;
            hi = lo;
        }
        // Geometric extrapolation of the remaining (0, hi) stub, plus the
        // rounding noise already absorbed into the panel sums.
        double ratio = std::pow(2.0, -(2.0 - 2.0 * s));
        if (std::abs(prev) > 0.0)
            ratio = std::clamp(std::abs(last) / std::abs(prev), ratio, 0.9);
        inner_error = 2.0 * std::abs(last) * ratio / (1.0 - ratio) + noise_sum;
    }

    // (iii) far field beyond R_eff.
    double tail_piece = 0.0;
    double tail_bound = 0.0;
    double tail_err = 0.0;
    const double centered = ux - (compact ? 0.0 : u.asymptote);
    if (compact) {
        if (ux != 0.0) {
            if (k.homogeneous) {
                tail_piece = ux * shell.kernel_angular_unit *
                             tail_exponent_integral(R_eff, 2.0 * s);
            } else {
                // Numeric kernel tail with a sandwich bracket on the leftover.
                double r0 = R_eff;
                double acc = 0.0, accerr = 0.0;
                const double omega = sphere_area(n);
                for (int j = 0; j < 400; ++j) {
                    auto kshell = [&](double r) {
                        const double rpow = n == 1 ? 1.0 : (n == 2 ? r : r * r);
                        return std::pair<double, double>(rpow * shell.kbar(r), 0.0);
                    };
                    PanelEstimate p = gk15(kshell, r0, 2.0 * r0);
                    acc += p.value;
                    accerr += p.error;
                    r0 *= 2.0;
                    if (k.params.Lambda * omega * tail_exponent_integral(r0, 2.0 * s) <
                        1e-3 * cfg.tol * std::max(std::abs(middle.value), std::abs(acc)))
                        break;
                }
                const double rem = omega * tail_exponent_integral(r0, 2.0 * s);
                acc += 0.5 * (k.params.lambda + k.params.Lambda) * rem;
                accerr += 0.5 * (k.params.Lambda - k.params.lambda) * rem;
                tail_piece = ux * acc;
                tail_err = std::abs(ux) * accerr;
            }
        }
    } else {
        const double omega = sphere_area(n);
        if (centered != 0.0) {
            if (k.homogeneous) {
                tail_piece = centered * shell.kernel_angular_unit *
                             tail_exponent_integral(R_eff, 2.0 * s);
            } else {
                tail_piece = centered * 0.5 * (k.params.lambda + k.params.Lambda) * omega *
                             tail_exponent_integral(R_eff, 2.0 * s);
                tail_err = std::abs(centered) * 0.5 * (k.params.Lambda - k.params.lambda) *
                           omega * tail_exponent_integral(R_eff, 2.0 * s);
            }
        }
        // |u - asymptote| <= C_u 2^beta |z|^{-beta} on |z| >= R_eff >= 2|x|.
        tail_bound = u.decay_constant * std::pow(2.0, beta) * k.params.Lambda * omega *
                     tail_exponent_integral(R_eff, beta + 2.0 * s);
    }

    // The shell pass integrates over the full sphere; the symmetrized
    // representation carries a prefactor 1/2. The tail pieces were derived
    // with that prefactor folded in.
    QuadResult result;
    result.value = 0.5 * (middle.value + inner_value) + tail_piece;
    result.tail_bound = tail_bound;
    result.error_estimate =
        0.5 * (middle.error + inner_error) + tail_err + tail_bound;
    result.evaluations = evals;
    if (!middle.converged)
        throw accuracy_error("pv_integrate: refinement budget exhausted before tol", result);
    return result;
}

// ---------------------------------------------------------------------------
// direct_integral
// ---------------------------------------------------------------------------

QuadResult direct_integral(const ScalarField& u, const Kernel& k, const Vec3& x,
                           const QuadratureConfig& cfg) {
    cfg.validate();
    const int n = k.params.n;
    if (!u.support_radius)
        throw precondition_error("direct_integral requires a declared support radius");
    const double rho = *u.support_radius;
    const double xn = x.norm();
    if (!(xn > rho))
        throw precondition_error("direct_integral requires x outside the support");

    long evals = 0;
    auto f = [&](double r) {
        // Angular resolution grows as the kernel variation across the ring does.
        int m = cfg.angular;
        if (n >= 2) {
            const double gap = xn - r;
            m = std::min(2048, std::max(m, static_cast<int>(16.0 * r / gap)));
        }
        const double rpow = n == 1 ? 1.0 : (n == 2 ? r : r * r);
        const double ring = sphere_integral(n, m, [&](const Vec3& th) {
            ++evals;
            const Vec3 y = r * th;
            return u(y) * k(y - x);
        });
        return std::pair<double, double>(rpow * ring, 0.0);
    };
    AdaptiveOutcome out = adapt_geometric(f, 1e-9 * rho, rho, cfg.tol, cfg.depth);
    QuadResult result;
    result.value = out.value;
    result.error_estimate = out.error;
    result.evaluations = evals;
    if (!out.converged)
        throw accuracy_error("direct_integral: refinement budget exhausted", result);
    return result;
}

// ---------------------------------------------------------------------------
// Generic shell / line integration
// ---------------------------------------------------------------------------

ShellResult integrate_shell(const std::function<double(const Vec3&)>& f, int n,
                            double r0, double r1, const QuadratureConfig& cfg,
                            const std::function<double(const Vec3&)>& f_err) {
    cfg.validate();
    long evals = 0;
    auto shell = [&](double r) {
        const double rpow = n == 1 ? 1.0 : (n == 2 ? r : r * r);
        const double v = sphere_integral(n, cfg.angular, [&](const Vec3& th) {
            ++evals;
            return f(r * th);
        });
        double verr = 0.0;
        if (f_err)
            verr = sphere_integral(n, cfg.angular, [&](const Vec3& th) {
                return std::abs(f_err(r * th));
            });
        return std::pair<double, double>(rpow * v, rpow * verr);
    };
    const double lo = std::max(r0, 1e-12 * std::max(r1, 1.0));
    AdaptiveOutcome out = adapt_geometric(shell, lo, r1, cfg.tol, cfg.depth);
    ShellResult res;
    res.value = out.value;
    res.error_budget = out.companion + out.error;
    res.evaluations = evals;
    return res;
}

LineResult integrate_line(const std::function<double(double)>& f, double a, double b,
                          double tol, int depth) {
    struct Seg {
        double a, b;
        PanelEstimate est;
        int depth;
    };
    auto wrap = [&](double t) { return std::pair<double, double>(f(t), 0.0); };
    std::vector<Seg> segs{{a, b, gk15(wrap, a, b), 0}};
    long evals = 15;
    for (;;) {
        double total = 0.0, err = 0.0, mag = 0.0;
        std::size_t w = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].est.value;
            err += segs[i].est.error;
            mag += std::abs(segs[i].est.value);
            if (segs[i].est.error > segs[w].est.error) w = i;
        }
        if (err <= 0.5 * tol * std::max(std::abs(total), 1e-12 * mag)) break;
        if (segs[w].depth >= depth || segs.size() > 100000) break;
        Seg old = segs[w];
        const double mid = 0.5 * (old.a + old.b);
        segs[w] = {old.a, mid, gk15(wrap, old.a, mid), old.depth + 1};
        segs.push_back({mid, old.b, gk15(wrap, mid, old.b), old.depth + 1});
        evals += 30;
    }
    LineResult res;
    for (const Seg& s : segs) {
        res.value += s.est.value;
        res.error_estimate += s.est.error;
    }
    res.evaluations = evals;
    return res;
}

}  // namespace nll
