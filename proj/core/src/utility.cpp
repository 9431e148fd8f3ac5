#include "uistop/utility.hpp"

#include "uistop/hitting.hpp"

#include <cmath>
#include <stdexcept>

namespace uistop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_ratio(double x, double b, double p) {
    if (x == b) return 1.0;
    if (x == 0.0) return 0.0;
    return std::exp(p * std::log(x / b));
}

void check_kappa(double kappa) {
    if (!(kappa >= 0.0)) throw std::invalid_argument("utility: kappa must be >= 0");
}

// v(x; P) for premium PP (may be <= 0, in which case entry is immediate).
double value_at_premium(const DerivedParams& d, double x, double PP) {
    if (PP <= 0.0) return d.beta1 * x - PP;
    const double b = PP * d.q_star / (d.beta1 * (d.q_star - 1.0));
    if (x >= b) return d.beta1 * x - PP;
    return (d.beta1 * b - PP) * pow_ratio(x, b, d.q_star);
}

} // namespace

void UtilityConfig::validate() const {
    check_kappa(kappa);
    if (rho && !(*rho > 0.0)) throw std::invalid_argument("utility: rho must be > 0");
}

double suboptimal_threshold_raw(const ModelParams& params, const DerivedParams& derived,
                                double kappa) {
    params.validate();
    check_kappa(kappa);
    const double x = params.x0;
    if (!(x > 0.0)) throw std::invalid_argument("utility: x0 must be > 0");
    const double s2 = params.sigma * params.sigma;
    const double b_star = optimal_threshold(derived, params.premium);
    if (params.mu >= 0.5 * s2) return std::max(x, b_star); // hit is certain; base problem

    const double q = derived.q_star;
    const double a = 1.0 - 2.0 * params.mu / s2; // in (0, q)
    const double rhs = params.premium * q;
    auto lhs = [&](double b) {
        return a * kappa * std::exp((q - a) * std::log(b / x)) + (q - 1.0) * derived.beta1 * b;
    };

    if (lhs(x) >= rhs) return x;
    // lhs is strictly increasing and lhs(b_star) >= rhs, so the root lies in [x, b_star]
    double lo = x, hi = std::max(x, b_star);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (lhs(mid) < rhs ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double modified_threshold(const ModelParams& params, const DerivedParams& derived, double kappa) {
    params.validate();
    check_kappa(kappa);
    if (kappa > params.premium)
        throw std::invalid_argument("utility: kappa must not exceed the premium");
    return (params.premium - kappa) * derived.q_star / (derived.beta1 * (derived.q_star - 1.0));
}

double modified_value(const ModelParams& params, const DerivedParams& derived, double kappa,
                      double x) {
    const double b_dag = modified_threshold(params, derived, kappa);
    if (x < 0.0) throw std::invalid_argument("utility: x must be >= 0");
    if (x >= b_dag) return derived.beta1 * x + kappa - params.premium;
    // (P - kappa)/(q - 1) * (x / b_dag)^q
    return (params.premium - kappa) / (derived.q_star - 1.0) * pow_ratio(x, b_dag, derived.q_star);
}

double kappa_dag(const ModelParams& params, const DerivedParams& derived, double x) {
    params.validate();
    if (x < 0.0) throw std::invalid_argument("utility: x must be >= 0");
    return params.premium - derived.beta1 * (derived.q_star - 1.0) * x / derived.q_star;
}

double mean_time_threshold(const ModelParams& params, const DerivedParams& derived,
                           double kappa) {
    params.validate();
    check_kappa(kappa);
    const double x = params.x0;
    if (!(x > 0.0)) throw std::invalid_argument("utility: x0 must be > 0");
    const double a = params.mu - 0.5 * params.sigma * params.sigma;
    if (!(a > 0.0))
        throw std::invalid_argument("utility: mean-time variant needs mu > sigma^2/2");

    const double q = derived.q_star;
    auto objective = [&](double b) {
        const double mean_time = std::log(b / x) / a;
        return kappa * std::exp(-mean_time) +
               (derived.beta1 * b - params.premium) * pow_ratio(x, b, q);
    };

    // The objective may peak at b = x or at an interior point near b_star;
    // scan a grid (boundary included) and refine the best interior bracket.
    double hi = std::max(2.0 * optimal_threshold(derived, params.premium), 2.0 * x);
    for (int grow = 0; grow < 60 && objective(2.0 * hi) > objective(hi); ++grow) hi *= 2.0;

    constexpr int kGrid = 4097;
    double best_b = x, best_v = objective(x);
    const double step = (hi - x) / (kGrid - 1);
    for (int i = 1; i < kGrid; ++i) {
        const double b = x + step * i;
        const double v = objective(b);
        if (v > best_v) {
            best_v = v;
            best_b = b;
        }
    }
    if (best_b == x) return x;
    // golden-section polish inside one grid cell on each side
    double lo = std::max(x, best_b - step), up = std::min(hi, best_b + step);
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = up - inv_phi * (up - lo), d = lo + inv_phi * (up - lo);
    double fc = objective(c), fd = objective(d);
    while (up - lo > 1e-10 * std::max(1.0, up)) {
        if (fc > fd) {
            up = d;
            d = c;
            fd = fc;
            c = up - inv_phi * (up - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (up - lo);
            fd = objective(d);
        }
    }
    const double b_ref = 0.5 * (lo + up);
    return objective(b_ref) >= objective(x) ? b_ref : x;
}

double threshold_for(const ModelParams& params, const DerivedParams& derived,
                     const UtilityConfig& config) {
    config.validate();
    if (config.rho && std::fabs(*config.rho - derived.r_tilde) >
                          1e-12 * std::max(1.0, derived.r_tilde))
        throw std::invalid_argument(
            "utility: only rho equal to the effective discount rate reduces to this class");
    switch (config.variant) {
        case UtilityVariant::hit_prob_raw:
            return suboptimal_threshold_raw(params, derived, config.kappa);
        case UtilityVariant::hit_prob_powered:
        case UtilityVariant::mean_time_powered:
            return modified_threshold(params, derived, config.kappa);
        case UtilityVariant::mean_time_exp:
            return mean_time_threshold(params, derived, config.kappa);
    }
    throw std::logic_error("utility: unknown variant");
}

double value_for(const ModelParams& params, const DerivedParams& derived,
                 const UtilityConfig& config, double x) {
    const double b = threshold_for(params, derived, config);
    ThresholdPolicy policy{params, derived, b};
    switch (config.variant) {
        case UtilityVariant::hit_prob_raw:
            return config.kappa * hit_probability(policy) + enpv(policy);
        case UtilityVariant::hit_prob_powered:
        case UtilityVariant::mean_time_powered:
            return modified_value(params, derived, config.kappa, x);
        case UtilityVariant::mean_time_exp: {
            const double mt = mean_hitting_time(policy);
            return config.kappa * std::exp(-mt) + enpv(policy);
        }
    }
    throw std::logic_error("utility: unknown variant");
}

double consumption_gamma(double c, double r, double lambda0, double lambda1) {
    if (!(c >= 0.0)) throw std::invalid_argument("gamma: consumption must be >= 0");
    if (r < 0.0 || !(lambda0 > 0.0) || !(lambda1 > 0.0))
        throw std::invalid_argument("gamma: rates out of range");
    return lambda0 * c / ((r + lambda0) * (r + lambda1));
}

double max_premium(const ModelParams& params, double x, double gamma) {
    const DerivedParams d = derive(params);
    if (!(x > 0.0)) throw std::invalid_argument("max_premium: x must be > 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("max_premium: gamma must be >= 0");

    if (gamma == 0.0) {
        // v(x; P) > 0 for every premium; only immediate entry bounds P
        const double b_star = optimal_threshold(d, params.premium);
        return x >= b_star ? d.beta1 * x : kInf;
    }

    // v(x; P) decreases strictly from beta1*x (P -> 0, or the linear branch
    // for P <= 0) to 0; bisect v(x; P) = gamma. The linear branch root
    // beta1*x - gamma is a valid lower bracket for every gamma.
    double lo = d.beta1 * x - gamma;
    if (value_at_premium(d, x, lo) <= gamma) return lo;
    double hi = std::max(1e3 * d.beta1 * x, 2.0 * std::fabs(lo));
    while (value_at_premium(d, x, hi) > gamma) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (value_at_premium(d, x, mid) > gamma ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace uistop
