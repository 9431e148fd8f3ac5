#pragma once

/**
 * @file estimation.hpp
 * @brief Drift/volatility estimation from an observed wage path and the
 *        sequential drift test guarding against the non-hitting regime.
 *
 * On the log scale Y_t = ln X_t the weekly increments are i.i.d.
 * N(a dt, sigma^2 dt) with a = mu - sigma^2/2. The estimators are the
 * sample mean and variance of the increments; a-hat telescopes to
 * (Y_T - Y_0)/T.
 */

#include "uistop/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace uistop {

struct EstimateReport {
    double a_hat = 0.0;          // estimated mu - sigma^2/2, per week
    double sigma2_hat = 0.0;     // estimated sigma^2, per week
    double mu_hat = 0.0;         // a_hat + sigma2_hat/2
    double var_a_hat = 0.0;      // sigma^2 / T (plug-in)
    double var_sigma2_hat = 0.0; // 2 sigma^4 / (n - 1)
    double var_mu_hat = 0.0;     // sigma^2/T + sigma^4/(2(n-1))
    int n = 0;                   // number of increments
    double T = 0.0;              // observation span, weeks
};

// Requires a uniform time grid with n >= 2 increments and positive wages.
EstimateReport estimate(std::span<const double> times, std::span<const double> wages);

struct DriftTest {
    bool reject = false;
    double statistic = 0.0; // Y_T - Y_0
    double threshold = 0.0; // -z(alpha) sigma sqrt(T), or the t variant
};

// Tests H0: a >= 0 against a < 0 at level alpha in (0, 0.5]. Uses the
// normal test iff sigma is supplied, else the t-test with sigma-hat.
DriftTest test_drift(std::span<const double> times, std::span<const double> wages,
                     double alpha, std::optional<double> sigma = std::nullopt);

// Upper alpha-quantiles, accurate to better than 1e-8.
double normal_upper_quantile(double alpha);
double student_t_upper_quantile(double alpha, int dof);

enum class Action { keep_waiting, buy_now_hit, buy_now_rejected };

struct Decision {
    Action action = Action::keep_waiting;
    int week = 0;
};

// Weekly procedure: buy at the first week the wage reaches b_star; buy
// immediately when H0: a >= 0 is first rejected (t-test at fixed per-test
// alpha on all data so far; no multiple-testing correction, so the
// family-wise error rate exceeds alpha over long horizons).
// Single-owner mutable state; not shareable across threads.
class SequentialDecision {
public:
    SequentialDecision(double b_star, double alpha);

    // Feeds the observation for the next week (weeks must be consecutive);
    // returns the decision once one is reached, nullopt while waiting.
    std::optional<Decision> observe(int week, double wage);

    bool decided() const { return decided_; }
    const Decision& decision() const { return decision_; }

private:
    double b_star_;
    double alpha_;
    std::vector<double> times_;
    std::vector<double> wages_;
    bool decided_ = false;
    Decision decision_{};
};

// Batch convenience: runs the sequential procedure over a recorded path.
// When the stream ends undecided, returns keep_waiting at the last week.
Decision sequential_decision(std::span<const double> weeks, std::span<const double> wages,
                             const Solution& solution, double alpha);

} // namespace uistop
