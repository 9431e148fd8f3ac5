#include "uistop/sensitivity.hpp"

#include "uistop/hitting.hpp"

#include <cmath>
#include <stdexcept>

namespace uistop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double solve_value(ModelParams p, double lambda0, double mu, double x) {
    p.lambda0 = lambda0;
    p.mu = mu;
    const Solution s = solve(p);
    return value(x, s);
}

double solve_b(ModelParams p, double lambda0, double mu) {
    p.lambda0 = lambda0;
    p.mu = mu;
    return solve(p).b_star;
}

} // namespace

SensitivityReport derivatives(const ModelParams& params, double x, double rel_perturbation) {
    const DerivedParams d = derive(params); // validates; stochastic regime required
    if (params.mortality && params.mortality->lambda2 > 0.0)
        throw std::invalid_argument("derivatives: apply_mortality first; the mu/lambda0 "
                                    "derivatives assume the mortality-free parameterization");
    const double q = d.q_star;
    const double rt = d.r_tilde;
    const double r = params.r, lam0 = params.lambda0;
    const double P = params.premium, beta = params.beta;
    const double c = 0.5 * params.sigma * params.sigma;
    const double b = optimal_threshold(d, P);

    SensitivityReport rep;
    const double D = c * q * q + rt;
    rep.dq_dmu = -q * q / D;
    rep.dq_dlambda0 = q / D;
    rep.db_dmu = -P * c * q * q / (beta * lam0 * D);
    rep.db_dlambda0 = -P * ((c * q + r) * (c * q * q + r) + lam0 * r) / (beta * lam0 * lam0 * D);

    if (x <= b) {
        // v = P/(q-1) (x/b)^q
        const double ratio = x > 0.0 ? std::exp(q * std::log(x / b)) : 0.0;
        const double dv_dq =
            -P / ((q - 1.0) * (q - 1.0)) * ratio * (1.0 + (q - 1.0) * std::log(b / x));
        const double dv_db = -P * q / ((q - 1.0) * b) * ratio;
        rep.dv_dmu = dv_dq * rep.dq_dmu + dv_db * rep.db_dmu;
        rep.dv_dlambda0 = dv_dq * rep.dq_dlambda0 + dv_db * rep.db_dlambda0;
    } else {
        // v = beta lam0 x / (lam0 + r - mu) - P
        const double den = lam0 + r - params.mu;
        rep.dv_dmu = beta * lam0 * x / (den * den);
        rep.dv_dlambda0 = beta * x * (r - params.mu) / (den * den);
    }

    rep.rel_perturbation = rel_perturbation;
    rep.inc_b_mu = rep.db_dmu * params.mu * rel_perturbation;
    rep.inc_v_mu = rep.dv_dmu * params.mu * rel_perturbation;
    rep.inc_b_lambda0 = rep.db_dlambda0 * lam0 * rel_perturbation;
    rep.inc_v_lambda0 = rep.dv_dlambda0 * lam0 * rel_perturbation;
    return rep;
}

LimitsReport limits(const ModelParams& params, double x) {
    params.validate();
    if (!(params.sigma > 0.0)) throw std::invalid_argument("limits: sigma must be > 0");
    const ModelParams p = apply_mortality(params);
    const double r = p.r, lam0 = p.lambda0, mu = p.mu, P = p.premium, beta = p.beta;
    const double c = 0.5 * p.sigma * p.sigma;
    const double rt = r + lam0;

    LimitsReport rep;
    rep.mu_to_minus_inf = LimitEntry{kInf, kInf, 0.0, true, true, false};
    rep.mu_up_r_tilde = LimitEntry{1.0, P * (c + rt) / (beta * lam0), kInf, false, false, true};
    rep.lambda0_to_inf =
        LimitEntry{kInf, P / beta, x > P / beta ? beta * x - P : 0.0, true, false, false};

    LimitEntry low;
    if (mu < r) {
        rep.lambda0_lower_edge = 0.0;
        // q at lambda0 = 0 solves c q(q-1) + mu q - r = 0, root > 1 since mu < r
        const double m = mu - c;
        low.q_star = (-m + std::sqrt(m * m + 4.0 * c * r)) / (2.0 * c);
        low.b_star = kInf;
        low.b_divergent = true;
        low.value = 0.0;
    } else if (mu == r) {
        rep.lambda0_lower_edge = 0.0;
        low.q_star = 1.0;
        low.b_star = kInf;
        low.b_divergent = true;
        low.value = beta * x;
    } else {
        rep.lambda0_lower_edge = mu - r;
        low.q_star = 1.0;
        low.b_star = P * (c + mu) / (beta * (mu - r));
        low.value = kInf;
        low.v_divergent = true;
    }
    rep.lambda0_to_lower = low;
    return rep;
}

double lambda_star(const ModelParams& params, double x) {
    params.validate();
    if (!(params.sigma > 0.0)) throw std::invalid_argument("lambda_star: sigma must be > 0");
    if (!(x > 0.0)) throw std::invalid_argument("lambda_star: x must be > 0");
    const ModelParams p = apply_mortality(params);
    const double beta = p.beta, P = p.premium;
    if (x <= P / beta) return kInf; // b_star > P/beta for every lambda0

    if (p.mu == p.r) {
        // b_star = x forces q = beta x / (beta x - P); the characteristic
        // equation then gives lambda0 directly
        const double qx = beta * x / (beta * x - P);
        return (qx - 1.0) * (0.5 * p.sigma * p.sigma * qx + p.r);
    }

    // b_star is strictly decreasing in lambda0: bisect on b_star(lambda0) = x
    const double edge = std::max(0.0, p.mu - p.r);
    double lo = edge + 1e-12 * std::max(1.0, std::fabs(edge));
    if (solve_b(p, lo, p.mu) <= x) return lo; // threshold below x for every lambda0
    double hi = std::max(1.0, 2.0 * lo);
    while (solve_b(p, hi, p.mu) > x) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (solve_b(p, mid, p.mu) > x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<IsolinePoint> isolines(const ModelParams& params, double x, IsolineTarget target,
                                   double level, const IsolineWindow& window) {
    params.validate();
    if (window.n_lambda0 < 2 || window.n_mu < 2)
        throw std::invalid_argument("isolines: grid must be at least 2x2");
    if (!(window.lambda0_max > window.lambda0_min) || !(window.mu_max > window.mu_min))
        throw std::invalid_argument("isolines: empty window");
    if (!(window.lambda0_min > 0.0))
        throw std::invalid_argument("isolines: lambda0 window must be positive");

    const ModelParams p = apply_mortality(params);
    auto f = [&](double lam0, double mu) {
        return target == IsolineTarget::b_star ? solve_b(p, lam0, mu)
                                               : solve_value(p, lam0, mu, x);
    };

    std::vector<IsolinePoint> points;
    const double dl = (window.lambda0_max - window.lambda0_min) /
                      static_cast<double>(window.n_lambda0 - 1);
    const double dm = (window.mu_max - window.mu_min) / static_cast<double>(window.n_mu - 1);
    for (std::size_t i = 0; i < window.n_lambda0; ++i) {
        const double lam0 = window.lambda0_min + dl * static_cast<double>(i);
        const double mu_cap = lam0 + p.r - 1e-7 * std::max(1.0, lam0 + p.r);
        double prev_mu = 0.0, prev_f = 0.0;
        bool have_prev = false;
        for (std::size_t k = 0; k < window.n_mu; ++k) {
            const double mu = window.mu_min + dm * static_cast<double>(k);
            if (mu > mu_cap) break;
            const double fv = f(lam0, mu) - level;
            if (fv == 0.0) {
                // grid node on the level (exact on the v = beta x - P plateau)
                points.push_back(IsolinePoint{lam0, mu});
            } else if (have_prev && prev_f != 0.0 && (prev_f < 0.0) != (fv < 0.0)) {
                // bisect the bracket down to the level tolerance
                double a = prev_mu, b = mu, fa = prev_f;
                for (int it = 0; it < 100; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double fm = f(lam0, mid) - level;
                    if (std::fabs(fm) <= 1e-6 * std::fabs(level)) {
                        a = b = mid;
                        break;
                    }
                    if ((fa < 0.0) == (fm < 0.0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                points.push_back(IsolinePoint{lam0, 0.5 * (a + b)});
            }
            prev_mu = mu;
            prev_f = fv;
            have_prev = true;
        }
    }
    return points;
}

} // namespace uistop
