#include "uistop/model.hpp"

#include <cmath>
#include <stdexcept>

namespace uistop {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double ModelParams::r_tilde() const {
    return r + lambda0 + (mortality ? mortality->lambda2 : 0.0);
}

void ModelParams::validate() const {
    if (r < 0.0) throw std::invalid_argument("params: r must be >= 0");
    if (!(lambda0 > 0.0)) throw std::invalid_argument("params: lambda0 must be > 0");
    if (!(sigma >= 0.0)) throw std::invalid_argument("params: sigma must be >= 0");
    if (!(premium > 0.0)) throw std::invalid_argument("params: premium must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("params: beta must be > 0");
    if (!(x0 >= 0.0)) throw std::invalid_argument("params: x0 must be >= 0");
    if (lambda1 && !(*lambda1 > 0.0)) throw std::invalid_argument("params: lambda1 must be > 0");
    if (mortality) {
        if (mortality->lambda2 < 0.0) throw std::invalid_argument("params: lambda2 must be >= 0");
        if (mortality->a_dag < 0.0) throw std::invalid_argument("params: a_dag must be >= 0");
    }
    if (!(mu < r_tilde()))
        throw assumption_error("params: drift assumption violated, mu must be below "
                               "r + lambda0 (+ lambda2)");
}

DerivedParams derive(const ModelParams& params) {
    params.validate();
    if (params.sigma == 0.0)
        throw degenerate_sigma_error("derive: sigma is 0; use the deterministic regime");

    const ModelParams p = apply_mortality(params);
    const double rt = p.r + p.lambda0;
    const double beta1 = p.beta * p.lambda0 / (rt - p.mu);

    const double s2 = p.sigma * p.sigma;
    const double m = p.mu - 0.5 * s2;
    const double disc = std::sqrt(m * m + 2.0 * rt * s2);
    // conjugate form when m > 0 avoids cancellation for small sigma
    const double q_plus = m > 0.0 ? 2.0 * rt / (m + disc) : (-m + disc) / s2;
    const double q_minus = (-m - disc) / s2;
    return DerivedParams{rt, beta1, q_plus, q_minus};
}

double gain(double x, const DerivedParams& derived, double premium) {
    if (x < 0.0) throw std::invalid_argument("gain: x must be >= 0");
    return derived.beta1 * x - premium;
}

double optimal_threshold(const DerivedParams& derived, double premium) {
    if (!(derived.q_star > 1.0))
        throw std::domain_error("optimal_threshold: q_star must exceed 1");
    if (std::isinf(derived.q_star)) return premium / derived.beta1;
    return premium * derived.q_star / (derived.beta1 * (derived.q_star - 1.0));
}

Solution solve(const ModelParams& params) {
    params.validate();
    if (params.sigma > 0.0) {
        const DerivedParams d = derive(params);
        return Solution{params, d, optimal_threshold(d, params.premium), Regime::stochastic};
    }
    const ModelParams p = apply_mortality(params);
    const double rt = p.r + p.lambda0;
    const double beta1 = p.beta * p.lambda0 / (rt - p.mu);
    // sigma -> 0 limit of the characteristic root
    const double q0 = p.mu > 0.0 ? rt / p.mu : kInf;
    const DerivedParams d{rt, beta1, q0, std::numeric_limits<double>::quiet_NaN()};
    const DeterministicSolution ds = deterministic_threshold(params);
    return Solution{params, d, ds.b0_star, Regime::deterministic};
}

double value(double x, const Solution& solution) {
    if (x < 0.0) throw std::invalid_argument("value: x must be >= 0");
    const double beta1 = solution.derived.beta1;
    const double P = solution.params.premium;
    const double b = solution.b_star;
    if (x >= b) return beta1 * x - P;
    if (x == 0.0) return 0.0;

    if (solution.regime == Regime::stochastic || solution.params.mu > 0.0) {
        // (beta1 b - P)(x/b)^q, powers via exp/log so large q cannot overflow
        return (beta1 * b - P) * std::exp(solution.derived.q_star * std::log(x / b));
    }
    return 0.0; // mu <= 0, x below b0*: the threshold is never reached
}

DeterministicSolution deterministic_threshold(const ModelParams& params) {
    params.validate();
    if (params.sigma != 0.0)
        throw std::invalid_argument("deterministic_threshold: sigma must be 0");

    const ModelParams p = apply_mortality(params);
    const double rt = p.r + p.lambda0;
    const double beta1 = p.beta * p.lambda0 / (rt - p.mu);
    const double b0 = p.mu > 0.0 ? p.premium * rt / (beta1 * (rt - p.mu)) : p.premium / beta1;

    double t_star;
    if (p.x0 >= b0)
        t_star = 0.0;
    else if (p.mu <= 0.0)
        t_star = kInf;
    else
        t_star = std::log(b0 / p.x0) / p.mu;
    return DeterministicSolution{b0, t_star};
}

ModelParams apply_mortality(const ModelParams& params) {
    params.validate();
    if (!params.mortality || params.mortality->lambda2 == 0.0) {
        ModelParams p = params;
        p.mortality.reset();
        return p;
    }
    const double lambda2 = params.mortality->lambda2;
    const double a_dag = params.mortality->a_dag;

    // Re-mix the schedule against Exp(lambda1 + lambda2) when beta came
    // from a schedule; a directly-given beta has no mixing rate to replace.
    double beta_mixed = params.beta;
    if (params.schedule && params.lambda1)
        beta_mixed = beta_from_schedule(*params.schedule, *params.lambda1 + lambda2, params.r);

    ModelParams p = params;
    p.lambda0 = params.lambda0 + lambda2;
    p.beta = params.lambda0 / (params.lambda0 + lambda2) *
             (beta_mixed + lambda2 * a_dag / (params.r + params.lambda0));
    p.mortality.reset();
    return p;
}

} // namespace uistop
