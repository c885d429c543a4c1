#include <doctest.h>

#include <cmath>

#include "nll/iteration.hpp"

using namespace nll;

TEST_SUITE("iteration") {

TEST_CASE("classification truth table") {
    {
        const RegimeReport r = classify({3, 0.5, 1.2});
        CHECK(r.regime == Regime::subcritical_trivial);
        CHECK(*r.serrin_exponent == 1.5);
        CHECK(r.trace.has_value());
    }
    {
        const RegimeReport r = classify({3, 0.5, 1.5});
        CHECK(r.regime == Regime::critical_trivial);
        CHECK(*r.serrin_exponent == 1.5);
    }
    {
        const RegimeReport r = classify({3, 0.5, 2.0});
        CHECK(r.regime == Regime::supercritical_sharpness);
        CHECK_FALSE(r.trace.has_value());
    }
    {
        const RegimeReport r = classify({1, 0.75, 100.0});
        CHECK(r.regime == Regime::low_dimension_trivial);
        CHECK_FALSE(r.serrin_exponent.has_value());
    }
    // n = 2s sits in the low-dimension branch.
    CHECK(classify({1, 0.5, 7.0}).regime == Regime::low_dimension_trivial);
}

TEST_CASE("classification is a pure function") {
    const RegimeInput input{2, 0.3, 1.1};
    const RegimeReport a = classify(input);
    const RegimeReport b = classify(input);
    CHECK(a.regime == b.regime);
    CHECK(a.narrative == b.narrative);
    CHECK(a.trace->gamma == b.trace->gamma);
}

TEST_CASE("synthetic fixed point: a = -1, q = 2 gives gamma_inf = -2") {
    const IterationTrace t = iterate_exponents_with_a(-1.0, 2.0, 1.0, 1.0, 1.0, 50);
    CHECK(t.gamma_fixed_point == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("subcritical example: gamma_inf = -3 and M agrees on both routes") {
    const IterationTrace t = iterate_exponents({3, 0.5, 1.2}, 1.0, 1.0, 200);
    CHECK(t.a == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(t.gamma_fixed_point == doctest::Approx(-3.0).epsilon(1e-12));
    REQUIRE(t.first_negative_index.has_value());
    // Closed form: smallest m with 3 + 6 (1.2^{-m} - 1) ... = ceil(log_{1.2} 2) = 4.
    CHECK(*t.first_negative_index == 4);
    // Direct scan of the iterated sequence finds the same index.
    int scan = -1;
    for (std::size_t m = 0; m < t.gamma.size(); ++m)
        if (t.gamma[m] < 0.0) { scan = static_cast<int>(m); break; }
    CHECK(scan == 4);
}

TEST_CASE("critical example: gamma_m = 3 (2/3)^m and C_m -> Cbar^3") {
    const double cbar = 2.0;
    const IterationTrace t = iterate_exponents({3, 0.5, 1.5}, 1.0, cbar, 200);
    CHECK(t.a == 0.0);
    CHECK_FALSE(t.first_negative_index.has_value());
    for (int m : {0, 1, 2, 5, 10})
        CHECK(t.gamma[m] ==
              doctest::Approx(3.0 * std::pow(2.0 / 3.0, m)).epsilon(1e-13));
    REQUIRE(t.constant_limit.has_value());
    CHECK(*t.constant_limit == doctest::Approx(std::pow(cbar, 3.0)).epsilon(1e-13));
    CHECK(std::abs(std::log(t.constants.back()) - std::log(*t.constant_limit)) <=
          1e-10);
}

TEST_CASE("closed form tracks iteration to 1e-12 on a trivial-regime grid") {
    for (int n : {1, 2, 3}) {
        for (double s : {0.25, 0.5, 0.75}) {
            for (double q : {1.05, 1.2, 1.4}) {
                const RegimeInput in{n, s, q};
                const RegimeReport r = classify(in);
                if (r.regime == Regime::supercritical_sharpness) continue;
                const IterationTrace t = iterate_exponents(in, 1.0, 1.0, 200);
                CHECK(t.max_closed_form_gap <= 1e-12);
                CHECK(t.a + t.b == static_cast<double>(n));
            }
        }
    }
}

TEST_CASE("regime labels match their defining comparisons on a grid") {
    for (int n : {1, 2, 3}) {
        for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            for (double q : {1.01, 1.3, 2.0, 5.0, 50.0}) {
                const RegimeReport r = classify({n, s, q});
                CHECK((r.regime == Regime::low_dimension_trivial) == (n <= 2.0 * s));
                if (n > 2.0 * s) {
                    const double qs = n / (n - 2.0 * s);
                    CHECK((r.regime == Regime::supercritical_sharpness) == (q > qs));
                }
            }
        }
    }
}

TEST_CASE("gamma decreases strictly when a < 0") {
    const IterationTrace t = iterate_exponents({3, 0.5, 1.2}, 1.0, 1.0, 100);
    for (std::size_t m = 1; m < t.gamma.size(); ++m)
        CHECK(t.gamma[m] < t.gamma[m - 1]);
}

TEST_CASE("log-constant recursion converges to q ln(Cbar)/(q-1)") {
    const double q = 1.3;
    for (double c0 : {0.5, 1.0, 10.0}) {
        for (double cbar : {0.5, 1.0, 10.0}) {
            const IterationTrace t =
                iterate_exponents_with_a(-0.2, q, 2.0, c0, cbar, 200);
            const double limit = q * std::log(cbar) / (q - 1.0);
            CHECK(std::abs(std::log(t.constants.back()) - limit) <= 1e-10);
        }
    }
}

TEST_CASE("geometric-series exponent never falls below 2s") {
    const RegimeInput in{3, 0.5, 1.2};
    const IterationTrace t = iterate_exponents(in, 1.0, 1.0, 200);
    const double sigma_cap = 1.0 / (1.0 - std::pow(2.0, -2.0 * in.s));
    for (double g : t.gamma) {
        if (g > in.n) continue;
        CHECK(t.b - g / in.q >= 2.0 * in.s - 1e-12);
        // Each partial geometric sum obeys the uniform sigma bound.
        double sum = 0.0;
        for (int k = 0; k < 200; ++k) sum += std::pow(2.0, -k * (t.b - g / in.q));
        CHECK(sum <= sigma_cap + 1e-9);
    }
}

TEST_CASE("supercritical input cannot be iterated") {
    CHECK_THROWS_AS(iterate_exponents({3, 0.5, 2.0}, 1.0, 1.0, 10), regime_error);
}

TEST_CASE("critical split: zero field gives (0, 0) and wrong q is rejected") {
    const Kernel k = fractional_kernel(1, 0.25);
    QuadratureConfig cfg;
    cfg.tol = 1e-5;
    const CriticalSplit split =
        critical_tail_split(fields::constant(0.0, 1), k, 2.0, 1.0, 4.0, cfg);
    CHECK(split.j1 == doctest::Approx(0.0));
    CHECK(split.j2_bound == doctest::Approx(0.0));
    CHECK_THROWS_AS(critical_tail_split(fields::constant(0.0, 1), k, 1.9, 1.0, 4.0, cfg),
                    regime_error);
    CHECK_THROWS_AS(critical_tail_split(fields::constant(0.0, 1), k, 2.0, 4.0, 1.0, cfg),
                    precondition_error);
}

TEST_CASE("critical split: J1 respects its bound and halves like 2^{-2s}") {
    const double s = 0.25;
    const Kernel k = fractional_kernel(1, s);
    const ScalarField u = fields::power_decay(2.0, 1);
    QuadratureConfig cfg;
    cfg.tol = 1e-5;
    const CriticalSplit a = critical_tail_split(u, k, 2.0, 1.0, 4.0, cfg);
    const CriticalSplit b = critical_tail_split(u, k, 2.0, 1.0, 8.0, cfg);
    CHECK(a.j1 > 0.0);
    CHECK(a.j1 <= a.j1_bound * (1.0 + 1e-9));
    CHECK(a.lp_norm > 0.0);
    CHECK(std::isfinite(a.j2_bound));
    const double factor = b.j1 / a.j1;
    const double target = std::pow(2.0, -2.0 * s);
    CHECK(std::abs(factor - target) <= 0.15 * target);
}

}  // TEST_SUITE
