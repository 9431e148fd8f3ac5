#include "uistop/hitting.hpp"

#include <cmath>
#include <stdexcept>

namespace uistop {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// (x/b)^p via exp/log; q_star can be large for small sigma.
double pow_ratio(double x, double b, double p) {
    if (x == b) return 1.0;
    if (x == 0.0) return 0.0;
    return std::exp(p * std::log(x / b));
}
} // namespace

ThresholdPolicy make_policy(const ModelParams& params, const DerivedParams& derived, double b) {
    params.validate();
    if (!(b >= 0.0)) throw std::invalid_argument("policy: b must be >= 0");
    return ThresholdPolicy{params, derived, b};
}

double q1_of_theta(double mu, double sigma, double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("q1: theta must be > 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("q1: sigma must be > 0");
    const double s2 = sigma * sigma;
    const double m = mu - 0.5 * s2;
    const double disc = std::sqrt(m * m + 2.0 * theta * s2);
    return m > 0.0 ? 2.0 * theta / (m + disc) : (-m + disc) / s2;
}

double laplace_transform(const ThresholdPolicy& policy, double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("laplace_transform: theta must be > 0");
    const double x = policy.params.x0;
    if (x >= policy.b) return 1.0; // tau_b = 0
    return pow_ratio(x, policy.b, q1_of_theta(policy.params.mu, policy.params.sigma, theta));
}

double hit_probability(const ThresholdPolicy& policy) {
    const double x = policy.params.x0;
    if (x >= policy.b) return 1.0;
    const double s2 = policy.params.sigma * policy.params.sigma;
    if (policy.params.mu >= 0.5 * s2) return 1.0;
    return pow_ratio(x, policy.b, 1.0 - 2.0 * policy.params.mu / s2);
}

double mean_hitting_time(const ThresholdPolicy& policy) {
    const double x = policy.params.x0;
    if (x >= policy.b) return 0.0;
    const double a = policy.params.mu - 0.5 * policy.params.sigma * policy.params.sigma;
    if (a <= 0.0) return kInf; // includes the a = 0 boundary and the P(hit) < 1 case
    return std::log(policy.b / x) / a;
}

double enpv(const ThresholdPolicy& policy) {
    const double x = policy.params.x0;
    const double beta1 = policy.derived.beta1;
    const double P = policy.params.premium;
    if (policy.b <= x) return beta1 * x - P;
    return (beta1 * policy.b - P) * pow_ratio(x, policy.b, policy.derived.q_star);
}

GridMaxResult maximize_enpv(const ModelParams& params, const DerivedParams& derived,
                            const GridSpec& grid) {
    params.validate();
    if (!(grid.b_min >= 0.0) || !(grid.b_max > grid.b_min) || grid.n < 2)
        throw std::invalid_argument("maximize_enpv: degenerate grid");

    const double step = (grid.b_max - grid.b_min) / static_cast<double>(grid.n - 1);
    ThresholdPolicy policy{params, derived, 0.0};
    double best_b = grid.b_min;
    double best_v = -kInf;
    for (std::size_t i = 0; i < grid.n; ++i) {
        policy.b = grid.b_min + step * static_cast<double>(i);
        const double v = enpv(policy);
        if (v > best_v) {
            best_v = v;
            best_b = policy.b;
        }
    }
    return GridMaxResult{best_b, best_v};
}

double golden_section_refine(const ModelParams& params, const DerivedParams& derived,
                             double lo, double hi, double tol) {
    if (!(hi > lo) || !(tol > 0.0))
        throw std::invalid_argument("golden_section_refine: bad bracket");
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    ThresholdPolicy policy{params, derived, 0.0};
    auto f = [&](double b) {
        policy.b = b;
        return enpv(policy);
    };
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > tol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace uistop
