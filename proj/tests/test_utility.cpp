#include "uistop/utility.hpp"

#include "uistop/hitting.hpp"
#include "uistop/rng.hpp"

#include <doctest.h>

#include <cmath>

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

} // namespace

TEST_CASE("modified threshold: anchors and linearity") {
    const auto p = example_params(0.02);
    const auto d = derive(p);
    const double b_star = optimal_threshold(d, p.premium);

    CHECK(modified_threshold(p, d, 0.0) == doctest::Approx(b_star).epsilon(1e-14));
    CHECK(modified_threshold(p, d, 9000.0) == 0.0);
    CHECK_THROWS_AS(modified_threshold(p, d, 9000.1), std::invalid_argument);
    CHECK_THROWS_AS(modified_threshold(p, d, -1.0), std::invalid_argument);

    // worked: kappa_dag brings the threshold down to the current wage
    const double kd = kappa_dag(p, d, 346.0);
    CHECK(kd == doctest::Approx(162.710761731096).epsilon(1e-12));
    CHECK(modified_threshold(p, d, kd) == doctest::Approx(346.0).epsilon(1e-10));

    // linear and decreasing in kappa
    const double b1 = modified_threshold(p, d, 1000.0);
    const double b2 = modified_threshold(p, d, 2000.0);
    const double b3 = modified_threshold(p, d, 3000.0);
    CHECK(b2 - b3 == doctest::Approx(b1 - b2).epsilon(1e-10));
    CHECK(b1 > b2);
}

TEST_CASE("kappa_dag edges") {
    const auto p = example_params(0.02);
    const auto d = derive(p);
    const double b_star = optimal_threshold(d, p.premium);
    CHECK(kappa_dag(p, d, b_star) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(kappa_dag(p, d, 0.0) == doctest::Approx(9000.0).epsilon(1e-14));
}

TEST_CASE("modified value: worked anchors, monotonicity, continuity") {
    const auto p = example_params(0.02);
    const auto d = derive(p);

    CHECK(modified_value(p, d, 0.0, 346.0) == doctest::Approx(1389.61901158616).epsilon(1e-11));
    const double kd = kappa_dag(p, d, 346.0);
    CHECK(modified_value(p, d, kd, 346.0) == doctest::Approx(1542.71076173110).epsilon(1e-11));
    CHECK(modified_value(p, d, 9000.0, 346.0) ==
          doctest::Approx(d.beta1 * 346.0).epsilon(1e-12));

    // strictly increasing in kappa at several x, continuous at kappa_dag
    for (double x : {100.0, 346.0, 352.37, 500.0}) {
        double prev = -1e18;
        for (int i = 0; i <= 200; ++i) {
            const double kappa = 9000.0 * i / 200.0;
            const double u = modified_value(p, d, kappa, x);
            CHECK(u > prev);
            prev = u;
        }
    }
    const double below = modified_value(p, d, kd * (1.0 - 1e-9), 346.0);
    const double above = modified_value(p, d, kd * (1.0 + 1e-9), 346.0);
    CHECK(below == doctest::Approx(above).epsilon(1e-7));
}

TEST_CASE("powered variant: threshold never exceeds b_star; direct objective agrees") {
    // composition check lives in the uncertain-hit regime (mu < sigma^2/2)
    const auto p = example_params(0.04);
    const auto d = derive(p);
    const double b_star = optimal_threshold(d, p.premium);
    const double a = 1.0 - 2.0 * p.mu / (p.sigma * p.sigma);

    for (double kappa : {0.0, 50.0, 500.0, 5000.0}) {
        const double b_dag = modified_threshold(p, d, kappa);
        CHECK(b_dag <= b_star + 1e-12);
        const auto pol = make_policy(p, d, std::max(b_dag, p.x0));
        const double direct =
            kappa * std::pow(hit_probability(pol), d.q_star / a) + enpv(pol);
        // for x <= b_dag the direct objective equals the closed-form value
        if (p.x0 <= b_dag)
            CHECK(direct == doctest::Approx(modified_value(p, d, kappa, p.x0)).epsilon(1e-10));
    }
}

TEST_CASE("raw hit-probability variant") {
    const auto p = example_params(0.04); // mu < sigma^2/2, hitting uncertain
    const auto d = derive(p);
    const double b_star = optimal_threshold(d, p.premium);
    const double a = 1.0 - 2.0 * p.mu / (p.sigma * p.sigma);
    const double q = d.q_star;

    SUBCASE("kappa = 0 reduces to the base threshold") {
        CHECK(suboptimal_threshold_raw(p, d, 0.0) == doctest::Approx(b_star).epsilon(1e-10));
    }

    SUBCASE("huge kappa stops immediately") {
        CHECK(suboptimal_threshold_raw(p, d, 1e9) == 346.0);
    }

    SUBCASE("worked kappa = 100: frozen root, residual, grid oracle") {
        const double b_dag = suboptimal_threshold_raw(p, d, 100.0);
        CHECK(b_dag == doctest::Approx(403.762822044433).epsilon(1e-9));
        CHECK(b_dag <= b_star);
        // defining equality holds to 1e-8 relative
        const double lhs = a * 100.0 * std::pow(b_dag / 346.0, q - a) +
                           (q - 1.0) * d.beta1 * b_dag;
        CHECK(lhs == doctest::Approx(p.premium * q).epsilon(1e-8));

        // independent grid maximization of the objective
        auto objective = [&](double b) {
            const auto pol = make_policy(p, d, b);
            return 100.0 * hit_probability(pol) + enpv(pol);
        };
        double best_b = 346.0, best_v = objective(346.0);
        const int n = 100000;
        for (int i = 1; i <= n; ++i) {
            const double b = 346.0 + (2.0 * b_star - 346.0) * i / n;
            const double v = objective(b);
            if (v > best_v) {
                best_v = v;
                best_b = b;
            }
        }
        CHECK(std::fabs(best_b - b_dag) <= (2.0 * b_star - 346.0) / n + 1e-12);
        CHECK(objective(b_dag) >= best_v - 1e-9);
    }

    SUBCASE("certain-hit regime falls back to the base problem") {
        const auto p2 = example_params(0.02);
        const auto d2 = derive(p2);
        CHECK(suboptimal_threshold_raw(p2, d2, 77.0) ==
              doctest::Approx(optimal_threshold(d2, p2.premium)).epsilon(1e-12));
    }
}

TEST_CASE("mean-time variants") {
    const auto p = example_params(0.02); // mu > sigma^2/2: mean time finite
    const auto d = derive(p);
    const double b_star = optimal_threshold(d, p.premium);

    SUBCASE("kappa = 0 recovers b_star") {
        CHECK(mean_time_threshold(p, d, 0.0) == doctest::Approx(b_star).epsilon(1e-6));
    }

    SUBCASE("powered variant is exactly the modified threshold") {
        UtilityConfig cfg;
        cfg.variant = UtilityVariant::mean_time_powered;
        for (double kappa : {0.0, 100.0, 4000.0, 9000.0}) {
            cfg.kappa = kappa;
            CHECK(threshold_for(p, d, cfg) == modified_threshold(p, d, kappa));
            CHECK(value_for(p, d, cfg, 346.0) == modified_value(p, d, kappa, 346.0));
        }
    }

    SUBCASE("kappa = 50: the boundary b = x wins (grid-verified)") {
        // exp(-E tau) decays on the scale of weeks, so a moderate kappa
        // already favours stopping at once: objective(x) = kappa + g(x)
        const double b_dag = mean_time_threshold(p, d, 50.0);
        CHECK(b_dag == 346.0);

        auto objective = [&](double b) {
            const auto pol = make_policy(p, d, b);
            return 50.0 * std::exp(-mean_hitting_time(pol)) + enpv(pol);
        };
        CHECK(objective(346.0) == doctest::Approx(1430.0).epsilon(1e-12));
        double best_v = -1e18;
        for (int i = 0; i <= 100000; ++i) {
            const double b = 346.0 + (3.0 * b_star - 346.0) * i / 100000.0;
            best_v = std::max(best_v, objective(b));
        }
        CHECK(best_v <= objective(346.0) + 1e-9);
    }

    SUBCASE("tiny kappa: interior optimum essentially at b_star") {
        // the objective is flat near its maximum, so the numerical argmax
        // carries ~1e-6 of localization noise
        const double b_dag = mean_time_threshold(p, d, 1.0);
        CHECK(b_dag == doctest::Approx(b_star).epsilon(1e-3));
        CHECK(b_dag <= b_star * (1.0 + 1e-8));
    }

    SUBCASE("infinite mean time is rejected") {
        const auto p4 = example_params(0.04);
        const auto d4 = derive(p4);
        CHECK_THROWS_AS(mean_time_threshold(p4, d4, 10.0), std::invalid_argument);
    }
}

TEST_CASE("b_dag never exceeds b_star for any variant and kappa") {
    for (double sigma : {0.04, 0.02}) {
        const auto p = example_params(sigma);
        const auto d = derive(p);
        const double b_star = optimal_threshold(d, p.premium);
        for (double kappa : {0.0, 10.0, 162.7, 1000.0, 9000.0}) {
            UtilityConfig cfg;
            cfg.kappa = kappa;
            for (auto variant : {UtilityVariant::hit_prob_raw, UtilityVariant::hit_prob_powered,
                                 UtilityVariant::mean_time_powered}) {
                cfg.variant = variant;
                const double b = threshold_for(p, d, cfg);
                CHECK(b <= std::max(b_star, p.x0) + 1e-9);
            }
        }
    }
}

TEST_CASE("rho is accepted only at the effective discount rate") {
    const auto p = example_params(0.02);
    const auto d = derive(p);
    UtilityConfig cfg;
    cfg.kappa = 10.0;
    cfg.rho = d.r_tilde;
    CHECK_NOTHROW(threshold_for(p, d, cfg));
    cfg.rho = 0.5 * d.r_tilde;
    CHECK_THROWS_AS(threshold_for(p, d, cfg), std::invalid_argument);
}

TEST_CASE("consumption gamma: formula, limits and a Monte-Carlo cross-check") {
    CHECK(consumption_gamma(0.0, 0.0004, 0.01, 0.011) == 0.0);
    const double lam1 = 1.0 / 91.0;
    const double g = consumption_gamma(300.0, 0.0004, 0.01, lam1);
    CHECK(g == doctest::Approx(25328.0586646083).epsilon(1e-12));
    // r -> 0 limit is c / lambda1
    CHECK(consumption_gamma(300.0, 0.0, 0.01, lam1) ==
          doctest::Approx(300.0 / lam1).epsilon(1e-12));

    // MC: gamma = E[e^{-r tau0} c (1 - e^{-r tau1})/r]
    Rng rng(99, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double tau0 = -std::log(1.0 - rng.uniform()) / 0.01;
        const double tau1 = -std::log(1.0 - rng.uniform()) * 91.0;
        const double v = std::exp(-0.0004 * tau0) * 300.0 *
                         (1.0 - std::exp(-0.0004 * tau1)) / 0.0004;
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::fabs(mean - g) < 3.0 * se);
}

TEST_CASE("max premium") {
    const auto p = example_params(0.02);
    const auto d = derive(p);

    SUBCASE("gamma = 0: unbounded below the threshold, beta1 x above it") {
        CHECK(std::isinf(max_premium(p, 346.0, 0.0)));
        auto ph = p;
        ph.x0 = 400.0; // above b* = 352.37
        CHECK(max_premium(ph, 400.0, 0.0) == doctest::Approx(30.0 * 400.0).epsilon(1e-12));
    }

    SUBCASE("interior gamma: frozen fixed point and residual") {
        const double pmax = max_premium(p, 346.0, 1000.0);
        CHECK(pmax == doctest::Approx(9532.07784408713).epsilon(1e-8));
        // residual: v(x; pmax) - gamma = 0 within 1e-8 beta1 x
        ModelParams pp = p;
        pp.premium = pmax;
        const double resid = value(346.0, solve(pp)) - 1000.0;
        CHECK(std::fabs(resid) <= 1e-8 * d.beta1 * 346.0);
    }

    SUBCASE("heavy consumption pushes the premium negative (linear branch)") {
        const double g = consumption_gamma(300.0, p.r, p.lambda0, 1.0 / 91.0);
        const double pmax = max_premium(p, 346.0, g);
        CHECK(pmax == doctest::Approx(d.beta1 * 346.0 - g).epsilon(1e-10));
        CHECK(pmax < 0.0);
    }

    SUBCASE("decreasing in gamma, increasing in x") {
        double prev = 1e300;
        for (double g : {500.0, 1000.0, 2000.0, 4000.0, 12000.0}) {
            const double pm = max_premium(p, 346.0, g);
            CHECK(pm < prev);
            prev = pm;
        }
        prev = -1e300;
        for (double x : {100.0, 200.0, 346.0, 400.0, 800.0}) {
            const double pm = max_premium(p, x, 1000.0);
            CHECK(pm > prev);
            prev = pm;
        }
    }
}
