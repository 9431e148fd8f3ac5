#pragma once

/**
 * @file sensitivity.hpp
 * @brief Comparative statics in the wage drift mu and the unemployment
 *        rate lambda0: analytic derivatives, limiting values, the critical
 *        rate lambda_star and isolines on the (lambda0, mu) plane.
 */

#include "uistop/model.hpp"

#include <cstddef>
#include <vector>

namespace uistop {

struct SensitivityReport {
    double dq_dmu = 0.0;      // < 0
    double dq_dlambda0 = 0.0; // > 0
    double db_dmu = 0.0;      // < 0
    double db_dlambda0 = 0.0; // < 0
    double dv_dmu = 0.0;      // > 0
    double dv_dlambda0 = 0.0; // sign depends on mu vs r

    // First-order increments for a relative perturbation of the parameter.
    double rel_perturbation = 0.0;
    double inc_b_mu = 0.0;
    double inc_v_mu = 0.0;
    double inc_b_lambda0 = 0.0;
    double inc_v_lambda0 = 0.0;
};

// Analytic partial derivatives of q_star, b_star and v(x); the v branch is
// selected by x vs b_star.
SensitivityReport derivatives(const ModelParams& params, double x,
                              double rel_perturbation = 0.01);

struct LimitEntry {
    double q_star = 0.0;
    double b_star = 0.0;
    double value = 0.0;
    bool q_divergent = false;
    bool b_divergent = false;
    bool v_divergent = false;
};

struct LimitsReport {
    LimitEntry mu_to_minus_inf;   // q -> inf, b -> inf, v -> 0
    LimitEntry mu_up_r_tilde;     // q -> 1, b finite, v -> inf
    LimitEntry lambda0_to_inf;    // q -> inf, b -> P/beta, v -> (beta x - P)^+ branch
    LimitEntry lambda0_to_lower;  // edge 0 (mu <= r) or mu - r (mu > r)
    double lambda0_lower_edge = 0.0;
};

LimitsReport limits(const ModelParams& params, double x);

// Critical rate lambda_star = inf{lambda0 : b_star(lambda0) <= x}; +inf when
// x <= P/beta (the threshold never comes down to x). For mu == r solved in
// closed form from b_star = x and the characteristic equation; root-found
// by bisection otherwise (b_star is strictly decreasing in lambda0).
double lambda_star(const ModelParams& params, double x);

enum class IsolineTarget { b_star, value };

struct IsolineWindow {
    double lambda0_min = 0.0, lambda0_max = 0.0;
    double mu_min = 0.0, mu_max = 0.0;
    std::size_t n_lambda0 = 400, n_mu = 400;
};

struct IsolinePoint {
    double lambda0 = 0.0;
    double mu = 0.0;
};

// Level-curve points of b_star or v(x) over the window, scanned per
// lambda0 column with sign changes refined to |target - level| <= 1e-6 level.
// Points outside mu < lambda0 + r are never produced. Empty result when the
// level is not attained.
std::vector<IsolinePoint> isolines(const ModelParams& params, double x,
                                   IsolineTarget target, double level,
                                   const IsolineWindow& window);

} // namespace uistop
