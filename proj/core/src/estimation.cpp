#include "uistop/estimation.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <stdexcept>

namespace uistop {

namespace {

void check_series(std::span<const double> times, std::span<const double> wages) {
    if (times.size() != wages.size())
        throw std::invalid_argument("estimate: times and wages differ in length");
    if (times.size() < 3)
        throw std::invalid_argument("estimate: need at least 2 increments");
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw std::invalid_argument("estimate: time grid must be increasing");
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double step = times[i] - times[i - 1];
        if (std::fabs(step - dt) > 1e-9 * std::max(1.0, std::fabs(dt)))
            throw std::invalid_argument("estimate: non-uniform observation grid");
    }
    for (double w : wages)
        if (!(w > 0.0)) throw std::invalid_argument("estimate: wages must be positive");
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 0.5))
        throw std::invalid_argument("test: alpha must be in (0, 0.5]");
}

} // namespace

EstimateReport estimate(std::span<const double> times, std::span<const double> wages) {
    check_series(times, wages);
    const int n = static_cast<int>(times.size()) - 1;
    const double T = times.back() - times.front();

    // a-hat telescopes: only the endpoints enter
    const double a_hat = std::log(wages.back() / wages.front()) / T;

    // sample variance of the log-increments, scaled back to per-week
    const double dt = T / n;
    const double zbar = a_hat * dt;
    double ss = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double z = std::log(wages[i] / wages[i - 1]);
        ss += (z - zbar) * (z - zbar);
    }
    const double sigma2_hat = ss / ((n - 1) * dt);

    EstimateReport rep;
    rep.a_hat = a_hat;
    rep.sigma2_hat = sigma2_hat;
    rep.mu_hat = a_hat + 0.5 * sigma2_hat;
    rep.var_a_hat = sigma2_hat / T;
    rep.var_sigma2_hat = 2.0 * sigma2_hat * sigma2_hat / (n - 1);
    rep.var_mu_hat = sigma2_hat / T + sigma2_hat * sigma2_hat / (2.0 * (n - 1));
    rep.n = n;
    rep.T = T;
    return rep;
}

double normal_upper_quantile(double alpha) {
    check_alpha(alpha);
    return boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - alpha);
}

double student_t_upper_quantile(double alpha, int dof) {
    check_alpha(alpha);
    if (dof < 1) throw std::invalid_argument("t quantile: dof must be >= 1");
    return boost::math::quantile(boost::math::students_t_distribution<double>(dof), 1.0 - alpha);
}

DriftTest test_drift(std::span<const double> times, std::span<const double> wages, double alpha,
                     std::optional<double> sigma) {
    check_series(times, wages);
    check_alpha(alpha);
    const double T = times.back() - times.front();
    const double statistic = std::log(wages.back() / wages.front());

    double threshold;
    if (sigma) {
        if (!(*sigma > 0.0)) throw std::invalid_argument("test: sigma must be > 0");
        threshold = -normal_upper_quantile(alpha) * (*sigma) * std::sqrt(T);
    } else {
        const EstimateReport rep = estimate(times, wages);
        const double sigma_hat = std::sqrt(rep.sigma2_hat);
        threshold = -student_t_upper_quantile(alpha, rep.n - 1) * sigma_hat * std::sqrt(T);
        if (sigma_hat == 0.0) // degenerate path: only a strict drop is evidence
            return DriftTest{statistic < 0.0, statistic, threshold};
    }
    return DriftTest{statistic <= threshold, statistic, threshold};
}

SequentialDecision::SequentialDecision(double b_star, double alpha)
    : b_star_(b_star), alpha_(alpha) {
    check_alpha(alpha);
    if (!(b_star > 0.0)) throw std::invalid_argument("sequential: b_star must be > 0");
}

std::optional<Decision> SequentialDecision::observe(int week, double wage) {
    if (decided_) return decision_;
    if (!(wage > 0.0)) throw std::invalid_argument("sequential: wages must be positive");
    if (!times_.empty() && week != static_cast<int>(times_.back()) + 1)
        throw std::invalid_argument("sequential: weeks must be consecutive");

    times_.push_back(static_cast<double>(week));
    wages_.push_back(wage);

    if (wage >= b_star_) {
        decided_ = true;
        decision_ = Decision{Action::buy_now_hit, week};
        return decision_;
    }
    if (times_.size() >= 3) {
        const DriftTest t = test_drift(times_, wages_, alpha_);
        if (t.reject) {
            decided_ = true;
            decision_ = Decision{Action::buy_now_rejected, week};
            return decision_;
        }
    }
    return std::nullopt;
}

Decision sequential_decision(std::span<const double> weeks, std::span<const double> wages,
                             const Solution& solution, double alpha) {
    if (weeks.size() != wages.size() || weeks.empty())
        throw std::invalid_argument("sequential: bad series");
    SequentialDecision proc(solution.b_star, alpha);
    for (std::size_t i = 0; i < weeks.size(); ++i) {
        if (auto d = proc.observe(static_cast<int>(std::llround(weeks[i])), wages[i])) return *d;
    }
    return Decision{Action::keep_waiting, static_cast<int>(std::llround(weeks.back()))};
}

} // namespace uistop
