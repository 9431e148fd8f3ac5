#pragma once

/**
 * @file hitting.hpp
 * @brief Analytic law of the first hitting time tau_b and the expected net
 *        present value of threshold strategies.
 */

#include "uistop/model.hpp"

#include <cstddef>

namespace uistop {

struct ThresholdPolicy {
    ModelParams params;
    DerivedParams derived;
    double b = 0.0; // threshold, currency/week, >= 0
};

ThresholdPolicy make_policy(const ModelParams& params, const DerivedParams& derived, double b);

// Exponent q1(theta) of the hitting-time Laplace transform (x/b)^{q1(theta)}.
double q1_of_theta(double mu, double sigma, double theta);

// E[e^{-theta tau_b}] for theta > 0; equals 1 when x >= b.
double laplace_transform(const ThresholdPolicy& policy, double theta);

// P(tau_b < inf): 1 when mu >= sigma^2/2, else (x/b)^{1 - 2 mu / sigma^2}.
double hit_probability(const ThresholdPolicy& policy);

// E[tau_b]: 0 when x >= b; ln(b/x)/(mu - sigma^2/2) when mu > sigma^2/2;
// +inf otherwise.
double mean_hitting_time(const ThresholdPolicy& policy);

// eNPV(x; tau_b) = (beta1 b - P)(x/b)^{q*} for b >= x, beta1 x - P for b <= x.
double enpv(const ThresholdPolicy& policy);

struct GridSpec {
    double b_min = 0.0;
    double b_max = 0.0;
    std::size_t n = 0;
};

struct GridMaxResult {
    double b_hat = 0.0;
    double value = 0.0;
};

// Brute-force maximizer of enpv over a uniform grid; the independent oracle
// for b_star (no unimodality assumption). Ties resolve to the lowest b.
GridMaxResult maximize_enpv(const ModelParams& params, const DerivedParams& derived,
                            const GridSpec& grid);

// Golden-section refinement of a bracket around the grid argmax; assumes
// unimodality inside [lo, hi], so use only after maximize_enpv.
double golden_section_refine(const ModelParams& params, const DerivedParams& derived,
                             double lo, double hi, double tol);

} // namespace uistop
