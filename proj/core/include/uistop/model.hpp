#pragma once

/**
 * @file model.hpp
 * @brief Model parameters, derived quantities and the closed-form solution
 *        of the optimal entry problem.
 *
 * The wage follows a geometric Brownian motion dX/X = mu dt + sigma dB,
 * X_0 = x. Entering at stopping time tau pays the expected net benefit
 * g(X_tau) = beta1*X_tau - P discounted at r_tilde = r + lambda0. The
 * optimal rule is the hitting time of the critical wage b_star.
 *
 * Up to the scale factor beta1, this is a perpetual American call on the
 * wage with strike P/beta1 and rate r_tilde, except that the payoff is not
 * truncated at zero (the same threshold and value result) and that the
 * waiting time may be infinite when mu < sigma^2/2, which motivates the
 * utility-modified rules in utility.hpp.
 */

#include "uistop/errors.hpp"
#include "uistop/schedule.hpp"

#include <optional>

namespace uistop {

struct Mortality {
    double lambda2 = 0.0; // force of mortality, per week
    double a_dag = 0.0;   // death-in-service lump sum, multiples of final wage
};

struct ModelParams {
    double r = 0.0;       // inflation rate, per week
    double lambda0 = 0.0; // loss-of-job rate, per week
    double mu = 0.0;      // wage drift, per week
    double sigma = 0.0;   // wage volatility, per sqrt(week), >= 0
    double premium = 0.0; // entry premium P, currency
    double beta = 0.0;    // expected-benefit multiplier
    double x0 = 0.0;      // initial wage, currency/week

    std::optional<double> lambda1;           // re-employment rate, when known
    std::optional<Mortality> mortality;      // constant-force extension
    std::optional<BenefitSchedule> schedule; // source of beta, when given

    // Throws std::invalid_argument on range errors and assumption_error
    // when mu >= r + lambda0 (+ lambda2).
    void validate() const;

    double r_tilde() const;
};

struct DerivedParams {
    double r_tilde = 0.0; // effective discount rate
    double beta1 = 0.0;   // marginal value of wage at entry
    double q_star = 0.0;  // positive root (>1) of (sigma^2/2) q(q-1) + mu q - r_tilde = 0
    double q_minus = 0.0; // negative root, exposed for reference only
};

enum class Regime { stochastic, deterministic };

struct Solution {
    ModelParams params;
    DerivedParams derived;
    double b_star = 0.0;
    Regime regime = Regime::stochastic;
};

// Derives r_tilde, beta1 and the characteristic roots. Requires sigma > 0
// (degenerate_sigma_error otherwise) and Assumption mu < r_tilde.
DerivedParams derive(const ModelParams& params);

// g(x) = beta1 x - P.
double gain(double x, const DerivedParams& derived, double premium);

// b_star = P q_star / (beta1 (q_star - 1)).
double optimal_threshold(const DerivedParams& derived, double premium);

// Full solution; dispatches on sigma == 0 to the deterministic regime,
// where q_star is reported as r_tilde/mu (mu > 0) or +inf (mu <= 0).
Solution solve(const ModelParams& params);

// v(x): (beta1 b - P)(x/b)^{q} below b_star, beta1 x - P above.
double value(double x, const Solution& solution);

struct DeterministicSolution {
    double b0_star = 0.0; // critical wage
    double t_star = 0.0;  // entry time, weeks (may be +inf)
};

// sigma == 0 baseline: wage path x e^{mu t}; entry at the first t with
// x e^{mu t} >= b0_star.
DeterministicSolution deterministic_threshold(const ModelParams& params);

// Folds a constant force of mortality into an equivalent mortality-free
// parameterization: lambda0 += lambda2 and beta is rescaled (re-mixing the
// schedule with rate lambda1 + lambda2 when beta came from a schedule).
// lambda2 == 0 returns the input unchanged.
ModelParams apply_mortality(const ModelParams& params);

} // namespace uistop
