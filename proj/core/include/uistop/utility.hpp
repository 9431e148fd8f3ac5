#pragma once

/**
 * @file utility.hpp
 * @brief Utility-modified entry rules in the hitting-time class and the
 *        consumption-adjusted maximum premium.
 *
 * The preference weight kappa rewards ever entering (hit-probability
 * variants) or penalizes long waits (mean-time variants). The powered
 * variants reduce exactly to the base problem with premium P - kappa.
 * The combined objective mixing kappa P(tau < inf) with kappa exp(-E[tau])
 * has no closed-form reduction even in the hitting-time class and is not
 * implemented; only the four variants below are.
 */

#include "uistop/model.hpp"

#include <optional>

namespace uistop {

enum class UtilityVariant {
    hit_prob_raw,       // kappa * P(tau_b < inf) + eNPV
    hit_prob_powered,   // kappa * P(tau_b < inf)^{q*/(1-2mu/sigma^2)} + eNPV
    mean_time_exp,      // kappa * exp(-E[tau_b]) + eNPV
    mean_time_powered,  // same solution as hit_prob_powered
};

struct UtilityConfig {
    double kappa = 0.0;
    UtilityVariant variant = UtilityVariant::hit_prob_powered;
    std::optional<double> rho = std::nullopt; // only rho == r_tilde reduces to this class

    void validate() const;
};

// Raw hit-probability variant: the smallest b >= x with
// a kappa (b/x)^{q*-a} + (q*-1) beta1 b >= P q*, a = 1 - 2 mu/sigma^2.
// Requires mu < sigma^2/2 (otherwise the hit probability is 1 and the
// problem is the base one: returns b_star, clamped to x from below).
double suboptimal_threshold_raw(const ModelParams& params, const DerivedParams& derived,
                                double kappa);

// Powered variants: b_dag = (P - kappa) q* / (beta1 (q* - 1)), kappa in [0, P].
double modified_threshold(const ModelParams& params, const DerivedParams& derived,
                          double kappa);

// Value of the powered variants: the base value function with premium
// P - kappa, plus kappa on the stopped branch.
double modified_value(const ModelParams& params, const DerivedParams& derived,
                      double kappa, double x);

// Weight at which the modified threshold drops to the current wage:
// kappa_dag = P - beta1 (q* - 1) x / q*.
double kappa_dag(const ModelParams& params, const DerivedParams& derived, double x);

// Mean-time variant with plain exp(-E[tau_b]) weighting; requires
// mu > sigma^2/2. Solved numerically on [x, B] (the objective may peak at
// the boundary b = x or at an interior point near b_star).
double mean_time_threshold(const ModelParams& params, const DerivedParams& derived,
                           double kappa);

// Threshold / objective value for any variant.
double threshold_for(const ModelParams& params, const DerivedParams& derived,
                     const UtilityConfig& config);
double value_for(const ModelParams& params, const DerivedParams& derived,
                 const UtilityConfig& config, double x);

// Expected discounted consumption over the unemployment spell:
// gamma = lambda0 c / ((r + lambda0)(r + lambda1)).
double consumption_gamma(double c, double r, double lambda0, double lambda1);

// Largest premium with v(x; P) - gamma >= 0. For gamma > 0 solved as a
// fixed point in P (b_star depends on P); may be negative when consumption
// outweighs the benefit. gamma == 0: beta1 x when x >= b_star(params),
// +inf otherwise (the value is positive for every premium).
double max_premium(const ModelParams& params, double x, double gamma);

} // namespace uistop
