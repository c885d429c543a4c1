#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "../tests/support/oracle.hpp"
#include "nll/nonlocal_operator.hpp"

using namespace nll;

TEST_SUITE("operator") {

TEST_CASE("bump: plateau, support, monotone transition") {
    const ScalarField eta = make_bump(1);
    CHECK(eta(Vec3{0.5}) == 1.0);
    CHECK(eta(Vec3{-0.99}) == 1.0);
    CHECK(eta(Vec3{3.0}) == 0.0);
    CHECK(eta(Vec3{2.0}) == 0.0);
    const double mid = eta(Vec3{1.5});
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    double prev = 1.0;
    for (double t = 1.0; t <= 2.0; t += 0.05) {
        const double v = eta(Vec3{t});
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
    CHECK_THROWS_AS(make_bump(4), parameter_error);
}

TEST_CASE("bump is radial in two dimensions") {
    const ScalarField eta = make_bump(2);
    for (double r : {0.3, 1.2, 1.7}) {
        const double a = eta(Vec3{r, 0.0});
        const double b = eta(Vec3{0.0, r});
        const double c = eta(Vec3{r * std::sqrt(0.5), -r * std::sqrt(0.5)});
        CHECK(a == doctest::Approx(b).epsilon(1e-14));
        CHECK(a == doctest::Approx(c).epsilon(1e-14));
    }
}

TEST_CASE("phi_R: plateau on B_R, support in B_2R, range [0,1]") {
    for (double R : {1.0, 3.0, 16.0}) {
        const ScalarField phi = make_cutoff_family(1, R).phi();
        CHECK(phi(Vec3{0.5 * R}) == 1.0);
        CHECK(phi(Vec3{R * 0.999}) == 1.0);
        CHECK(phi(Vec3{2.0 * R}) == 0.0);
        CHECK(phi(Vec3{2.5 * R}) == 0.0);
        const double v = phi(Vec3{1.5 * R});
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(*phi.support_radius == 2.0 * R);
    }
}

TEST_CASE("apply_operator: constant field maps to zero everywhere") {
    const Kernel k = fractional_kernel(1, 0.5);
    const auto results = apply_operator(k, fields::constant(1.0, 1),
                                        {Vec3{0.0}, Vec3{1.0}, Vec3{-3.0}}, {});
    for (const QuadResult& r : results) {
        CHECK(r.value == 0.0);
        CHECK(r.error_estimate == 0.0);
    }
}

TEST_CASE("apply_operator far outside the support matches the direct integral") {
    QuadratureConfig cfg;
    const double R = 2.0;
    for (int n : {1, 2}) {
        const Kernel k = fractional_kernel(n, 0.25);
        const ScalarField phi = make_cutoff_family(n, R).phi();
        const Vec3 x = n == 1 ? Vec3{2.5 * 2.0 * R} : Vec3{3.0 * R, 4.0 * R};
        const double sym = apply_operator(k, phi, {x}, cfg)[0].value;
        const double dir = direct_integral(phi, k, x, cfg).value;
        CHECK(std::abs(std::abs(sym) - std::abs(dir)) <=
              10.0 * cfg.tol * std::abs(dir));
    }
}

TEST_CASE("cutoff constants are flat across scales (1D)") {
    const Kernel k = fractional_kernel(1, 0.5);
    const CutoffFamily fam = make_cutoff_family(1, 1.0);
    const auto reports = verify_cutoff_bound(k, fam, {1.0, 2.0, 4.0, 8.0}, {});
    REQUIRE(reports.size() == 4);
    double ilo = 1e300, ihi = 0.0, olo = 1e300, ohi = 0.0;
    for (const auto& r : reports) {
        CHECK(r.failures.empty());
        CHECK(r.inner_constant > 0.0);
        CHECK(std::isfinite(r.outer_constant));
        ilo = std::min(ilo, r.inner_constant);
        ihi = std::max(ihi, r.inner_constant);
        olo = std::min(olo, r.outer_constant);
        ohi = std::max(ohi, r.outer_constant);
        // The crossover annulus 2R <= |x| <= 4R is populated and finite.
        bool crossover_seen = false;
        for (const SampleRow& row : r.outer_samples) {
            if (row.radius >= 2.0 * r.scale && row.radius <= 4.0 * r.scale) {
                crossover_seen = true;
                CHECK(std::isfinite(row.value));
            }
        }
        CHECK(crossover_seen);
    }
    CHECK(ihi <= 1.25 * ilo);
    CHECK(ohi <= 1.25 * olo);
}

TEST_CASE("results do not depend on the worker count") {
    const Kernel k = fractional_kernel(1, 0.5);
    const CutoffFamily fam = make_cutoff_family(1, 1.0);
    setenv("NLL_JOBS", "1", 1);
    const auto serial = verify_cutoff_bound(k, fam, {1.0, 2.0}, {});
    setenv("NLL_JOBS", "3", 1);
    const auto threaded = verify_cutoff_bound(k, fam, {1.0, 2.0}, {});
    unsetenv("NLL_JOBS");
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].inner_constant == threaded[i].inner_constant);
        CHECK(serial[i].outer_constant == threaded[i].outer_constant);
        for (std::size_t j = 0; j < serial[i].inner_samples.size(); ++j)
            CHECK(serial[i].inner_samples[j].value ==
                  threaded[i].inner_samples[j].value);
    }
}

TEST_CASE("cutoff constants never read lambda") {
    const CutoffFamily fam = make_cutoff_family(1, 1.0);
    Kernel k = fractional_kernel(1, 0.5);
    const auto base = verify_cutoff_bound(k, fam, {1.0, 4.0}, {});
    Kernel lowered = k;
    lowered.params.lambda /= 10.0;  // same evaluate, weaker declared bound
    const auto again = verify_cutoff_bound(lowered, fam, {1.0, 4.0}, {});
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].inner_constant == again[i].inner_constant);
        CHECK(base[i].outer_constant == again[i].outer_constant);
    }
}

TEST_CASE("pairing: identical arguments agree exactly, disjoint bumps to 1e-6") {
    QuadratureConfig cfg;
    cfg.tol = 1e-7;
    const Kernel k = fractional_kernel(1, 0.5);
    const ScalarField f = fields::bump_at(Vec3{-5.0}, 1.0, 1);
    const ScalarField g = fields::bump_at(Vec3{5.0}, 1.0, 1);

    CHECK(pairing(k, f, f, cfg, 32.0) == pairing(k, f, f, cfg, 32.0));

    const double fg = pairing(k, f, g, cfg, 32.0);
    const double gf = pairing(k, g, f, cfg, 32.0);
    CHECK(fg < 0.0);  // disjoint positive bumps see each other negatively
    CHECK(std::abs(fg - gf) <= 1e-6 * std::max(1.0, std::abs(fg)));
}

TEST_CASE("pairing: zero field gives zero; non-compact input is rejected") {
    QuadratureConfig cfg;
    const Kernel k = fractional_kernel(1, 0.5);
    const ScalarField f = fields::bump_at(Vec3{0.0}, 1.0, 1);
    ScalarField zero;
    zero.dim = 1;
    zero.evaluate = [](const Vec3&) { return 0.0; };
    zero.support_radius = 2.0;
    CHECK(pairing(k, zero, f, cfg, 32.0) == 0.0);
    CHECK(pairing(k, f, zero, cfg, 32.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(pairing(k, fields::bubble(1, 0.25), f, cfg, 32.0),
                    precondition_error);
}

TEST_CASE("weak residual: u == 0 gives residual 0") {
    const Kernel k = fractional_kernel(1, 0.25);
    const WeakResidual res = weak_supersolution_residual(
        k, fields::constant(0.0, 1), 2.0, make_cutoff_family(1, 2.0), {});
    CHECK(res.value == doctest::Approx(0.0));
    CHECK(res.lhs == doctest::Approx(0.0));
    CHECK(res.rhs == doctest::Approx(0.0));
}

TEST_CASE("weak residual: constants are not supersolutions") {
    const Kernel k = fractional_kernel(1, 0.25);
    const CutoffFamily fam = make_cutoff_family(1, 1.0);
    const WeakResidual res =
        weak_supersolution_residual(k, fields::constant(1.0, 1), 2.0, fam, {});
    // L_K 1 == 0, so the residual is -\int phi_R < 0.
    const ScalarField phi = fam.phi();
    auto phi_line = [&](double r) { return phi(Vec3{r}) + phi(Vec3{-r}); };
    const double phi_mass = oracle::simpson_log(phi_line, 1e-9, 2.0, 200001);
    CHECK(res.value < 0.0);
    CHECK(res.value == doctest::Approx(-phi_mass).epsilon(1e-4));
    CHECK(res.rhs == doctest::Approx(phi_mass).epsilon(1e-4));
    CHECK(std::abs(res.lhs) <= res.error_budget);
}

TEST_CASE("weak residual rejects negative samples") {
    const Kernel k = fractional_kernel(1, 0.25);
    CHECK_THROWS_AS(weak_supersolution_residual(k, fields::cosine(1.0, 1), 2.0,
                                                make_cutoff_family(1, 1.0), {}),
                    precondition_error);
}

}  // TEST_SUITE
