#include "uistop/model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace uistop;

namespace {

ModelParams example_params(double sigma) {
    ModelParams p;
    p.r = 0.0004;
    p.lambda0 = 0.01;
    p.mu = 0.0004;
    p.sigma = sigma;
    p.premium = 9000.0;
    p.beta = 30.0;
    p.x0 = 346.0;
    return p;
}

// random valid parameter draw in a range keeping q_star moderate
ModelParams random_params(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> ur(0.0, 0.002), ul(0.002, 0.05), us(0.01, 0.1),
        um(-0.003, 0.003), up(1e3, 2e4), ub(5.0, 60.0), ux(50.0, 800.0);
    ModelParams p;
    for (;;) {
        p.r = ur(gen);
        p.lambda0 = ul(gen);
        p.sigma = us(gen);
        p.mu = um(gen);
        p.premium = up(gen);
        p.beta = ub(gen);
        p.x0 = ux(gen);
        if (p.mu < p.r + p.lambda0 - 1e-4) return p;
    }
}

} // namespace

TEST_CASE("derive: worked examples") {
    auto d1 = derive(example_params(0.04));
    CHECK(d1.r_tilde == doctest::Approx(0.0104).epsilon(1e-15));
    CHECK(d1.beta1 == doctest::Approx(30.0).epsilon(1e-14));
    CHECK(d1.q_star == doctest::Approx(3.86420807370024).epsilon(1e-12));
    CHECK(d1.q_minus == doctest::Approx(-3.36420807370024).epsilon(1e-12));

    auto d2 = derive(example_params(0.02));
    CHECK(d2.q_star == doctest::Approx(6.72841614740048).epsilon(1e-12));
}

TEST_CASE("derive: degenerate sigma and violated drift assumption") {
    CHECK_THROWS_AS(derive(example_params(0.0)), degenerate_sigma_error);
    auto p = example_params(0.02);
    p.mu = 0.0104; // = r_tilde
    CHECK_THROWS_AS(derive(p), assumption_error);
    p.mu = 0.02;
    CHECK_THROWS_AS(derive(p), assumption_error);
}

TEST_CASE("characteristic equation residual over random draws") {
    std::mt19937_64 gen(42);
    for (int k = 0; k < 1000; ++k) {
        const ModelParams p = random_params(gen);
        const DerivedParams d = derive(p);
        CHECK(d.q_star > 1.0);
        const double res =
            0.5 * p.sigma * p.sigma * d.q_star * (d.q_star - 1.0) + p.mu * d.q_star - d.r_tilde;
        CHECK(std::fabs(res) <= 1e-12 * d.r_tilde);
        const double res2 = 0.5 * p.sigma * p.sigma * d.q_minus * (d.q_minus - 1.0) +
                            p.mu * d.q_minus - d.r_tilde;
        CHECK(std::fabs(res2) <= 1e-10 * d.r_tilde);
        CHECK(d.q_minus < 0.0);
    }
}

TEST_CASE("gain function") {
    const auto d = derive(example_params(0.02));
    CHECK(gain(0.0, d, 9000.0) == doctest::Approx(-9000.0));
    CHECK(gain(346.0, d, 9000.0) == doctest::Approx(1380.0).epsilon(1e-12));
    CHECK(gain(9000.0 / d.beta1, d, 9000.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(gain(-1.0, d, 9000.0), std::invalid_argument);
}

TEST_CASE("optimal threshold decreases in q_star and has the large-q limit P/beta1") {
    DerivedParams d{0.0104, 30.0, 2.0, -1.0};
    double prev = 1e300;
    for (double q : {1.5, 2.0, 4.0, 16.0, 256.0, 1e6}) {
        d.q_star = q;
        const double b = optimal_threshold(d, 9000.0);
        CHECK(b < prev);
        CHECK(b > 9000.0 / 30.0);
        prev = b;
    }
    d.q_star = std::numeric_limits<double>::infinity();
    CHECK(optimal_threshold(d, 9000.0) == doctest::Approx(300.0).epsilon(1e-15));
}

TEST_CASE("optimal threshold: worked examples") {
    const auto p1 = example_params(0.04);
    CHECK(optimal_threshold(derive(p1), p1.premium) ==
          doctest::Approx(404.740993768806).epsilon(1e-12));
    const auto p2 = example_params(0.02);
    CHECK(optimal_threshold(derive(p2), p2.premium) ==
          doctest::Approx(352.370496884403).epsilon(1e-12));
}

TEST_CASE("value function: worked examples and shape") {
    const Solution s1 = solve(example_params(0.04));
    CHECK(value(346.0, s1) == doctest::Approx(1714.27757539229).epsilon(1e-11));
    const Solution s2 = solve(example_params(0.02));
    CHECK(value(346.0, s2) == doctest::Approx(1389.61901158616).epsilon(1e-11));

    CHECK(value(0.0, s2) == 0.0);
    // value matching at the boundary
    const double b = s2.b_star;
    CHECK(value(b, s2) == doctest::Approx(gain(b, s2.derived, 9000.0)).epsilon(1e-10));
    // strictly increasing, dominates gain and zero
    double prev = -1.0;
    for (double x = 0.0; x <= 2.0 * b; x += b / 37.0) {
        const double v = value(x, s2);
        CHECK(v > prev);
        CHECK(v >= 0.0);
        CHECK(v >= gain(x, s2.derived, 9000.0) - 1e-9);
        prev = v;
    }
}

TEST_CASE("smooth fit at the boundary") {
    std::mt19937_64 gen(3);
    for (int k = 0; k < 100; ++k) {
        const ModelParams p = random_params(gen);
        const Solution s = solve(p);
        const double h = 1e-6 * s.b_star;
        const double fd = (value(s.b_star + h, s) - value(s.b_star - h, s)) / (2.0 * h);
        CHECK(fd == doctest::Approx(s.derived.beta1).epsilon(1e-4));
    }
}

TEST_CASE("deterministic regime") {
    auto p = example_params(0.0);

    SUBCASE("mu > 0: threshold, entry time, value") {
        const auto ds = deterministic_threshold(p);
        // b0* = P r_tilde / (beta1 (r_tilde - mu)) with beta1 = 30
        CHECK(ds.b0_star == doctest::Approx(312.0).epsilon(1e-12));
        CHECK(ds.t_star == 0.0); // x = 346 is already above 312
        const Solution s = solve(p);
        CHECK(s.regime == Regime::deterministic);
        CHECK(value(346.0, s) == doctest::Approx(30.0 * 346.0 - 9000.0).epsilon(1e-12));

        // below the threshold the entry is delayed by log(b0/x)/mu
        ModelParams low = p;
        low.x0 = ds.b0_star / std::exp(1.0) * std::exp(0.0);
        const auto ds2 = deterministic_threshold(low);
        CHECK(ds2.t_star == doctest::Approx(1.0 / p.mu).epsilon(1e-12));
    }

    SUBCASE("mu <= 0: never reaches the threshold from below") {
        p.mu = -0.001;
        auto ds = deterministic_threshold(p);
        CHECK(ds.b0_star == doctest::Approx(9000.0 / (30.0 * 0.01 / (0.0104 + 0.001))));
        ModelParams low = p;
        low.x0 = 0.5 * ds.b0_star;
        CHECK(std::isinf(deterministic_threshold(low).t_star));
        CHECK(value(low.x0, solve(low)) == 0.0);
        // from above: immediate entry
        ModelParams high = p;
        high.x0 = ds.b0_star * 2.0;
        CHECK(deterministic_threshold(high).t_star == 0.0);
        const Solution sh = solve(high);
        CHECK(value(high.x0, sh) ==
              doctest::Approx(sh.derived.beta1 * high.x0 - 9000.0).epsilon(1e-12));
    }

    SUBCASE("sigma downto 0 consistency for mu > 0") {
        ModelParams ps = p;
        ps.x0 = 100.0;
        ps.sigma = 1e-6;
        const double b_stoch = solve(ps).b_star;
        const double b_det = deterministic_threshold(p).b0_star;
        CHECK(b_stoch == doctest::Approx(b_det).epsilon(1e-3));
    }
}

TEST_CASE("value function equals a scaled perpetual call with strike P/beta1") {
    // the entry problem is beta1 * sup E[e^{-r_tilde tau}(X_tau - K)] with
    // K = P/beta1 and no positive-part truncation; same exponent q*, same
    // threshold K q*/(q*-1), value scaled by beta1
    for (double sigma : {0.04, 0.02}) {
        const auto p = example_params(sigma);
        const Solution s = solve(p);
        const double K = p.premium / s.derived.beta1;
        const double q = s.derived.q_star;
        const double b_call = K * q / (q - 1.0);
        CHECK(s.b_star == doctest::Approx(b_call).epsilon(1e-14));
        for (double x : {50.0, 346.0, 352.37, 500.0}) {
            const double call = x >= b_call
                                    ? x - K
                                    : (b_call - K) * std::exp(q * std::log(x / b_call));
            CHECK(value(x, s) == doctest::Approx(s.derived.beta1 * call).epsilon(1e-12));
        }
    }
}

TEST_CASE("mortality: lambda2 = 0 is bit-identical, worked beta1 value") {
    auto p = example_params(0.02);
    p.mortality = Mortality{0.0, 52.0};
    const auto p0 = apply_mortality(p);
    CHECK(p0.lambda0 == p.lambda0);
    CHECK(p0.beta == p.beta);
    const auto d0 = derive(p);
    const auto dn = derive(example_params(0.02));
    CHECK(d0.r_tilde == dn.r_tilde);
    CHECK(d0.beta1 == dn.beta1);
    CHECK(d0.q_star == dn.q_star);

    SUBCASE("lambda2 > 0 shifts the discount rate") {
        auto pm = example_params(0.02);
        pm.mortality = Mortality{0.0005, 0.0};
        const auto dm = derive(pm);
        CHECK(dm.r_tilde == doctest::Approx(0.0109).epsilon(1e-15));
    }

    SUBCASE("worked beta1 with death-in-service benefit") {
        // hand-derived: beta1 = (0.01/0.0105) * (30 + 0.0005*52/0.0104) = 650/21
        auto pm = example_params(0.02);
        pm.mortality = Mortality{0.0005, 52.0};
        const auto dm = derive(pm);
        CHECK(dm.beta1 == doctest::Approx(650.0 / 21.0).epsilon(1e-13));
        CHECK(dm.r_tilde == doctest::Approx(0.0109).epsilon(1e-15));
    }

    SUBCASE("schedule-backed beta is re-mixed against lambda1 + lambda2") {
        auto pm = example_params(0.02);
        const auto sched = BenefitSchedule::french_1990s();
        const double lam1 = lambda1_from_mean_spell(91.0);
        pm.schedule = sched;
        pm.lambda1 = lam1;
        pm.beta = beta_from_schedule(sched, lam1, pm.r);
        pm.mortality = Mortality{0.0005, 52.0};

        const double beta_mixed = beta_from_schedule(sched, lam1 + 0.0005, pm.r);
        CHECK(beta_mixed < pm.beta); // faster exit from benefits is worth less
        const double want_beta1 = 0.01 / (0.0109 - 0.0004) *
                                  (beta_mixed + 0.0005 * 52.0 / (0.0004 + 0.01));
        const auto dm = derive(pm);
        CHECK(dm.beta1 == doctest::Approx(want_beta1).epsilon(1e-12));
        CHECK(dm.r_tilde == doctest::Approx(0.0109).epsilon(1e-15));
    }

    SUBCASE("updated assumption checked") {
        auto pm = example_params(0.02);
        pm.mu = 0.0106; // below r+lambda0+lambda2 = 0.0109 but above r+lambda0
        CHECK_THROWS_AS(derive(pm), assumption_error);
        pm.mortality = Mortality{0.0005, 0.0};
        CHECK_NOTHROW(derive(pm));
        pm.mu = 0.0109;
        CHECK_THROWS_AS(derive(pm), assumption_error);
    }
}

TEST_CASE("parameter validation") {
    auto p = example_params(0.02);
    p.lambda0 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = example_params(0.02);
    p.premium = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = example_params(0.02);
    p.sigma = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = example_params(0.02);
    p.x0 = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
