#include "uistop/schedule.hpp"

#include "uistop/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace uistop {

namespace {

// (1 - e^{-r u}) / r, continuous at r = 0.
double expm1_ratio(double r, double u) {
    if (r == 0.0) return u;
    return -std::expm1(-r * u) / r;
}

// integral of (c + m s) e^{-r s} over [u, w]
double linear_exp_integral(double c, double m, double r, double u, double w) {
    if (w <= u) return 0.0;
    if (r == 0.0) return c * (w - u) + 0.5 * m * (w * w - u * u);
    auto anti = [&](double s) { return -std::exp(-r * s) * ((c + m * s) / r + m / (r * r)); };
    return anti(w) - anti(u);
}

} // namespace

BenefitSchedule BenefitSchedule::piecewise_exponential(double h0, double s0_weeks, double delta) {
    BenefitSchedule s;
    s.kind = Kind::piecewise_exponential;
    s.h0 = h0;
    s.s0 = s0_weeks;
    s.delta = delta;
    s.validate();
    return s;
}

BenefitSchedule BenefitSchedule::tabulated(std::vector<std::pair<double, double>> knots) {
    BenefitSchedule s;
    s.kind = Kind::tabulated;
    s.table = std::move(knots);
    s.validate();
    return s;
}

BenefitSchedule BenefitSchedule::french_1990s() {
    // h0 = 57.4% of the final wage, 8-month grace period, 15% decline per
    // 3 months (weeks of 52/12 per month).
    return piecewise_exponential(0.574, 8.0 * 52.0 / 12.0, -(3.0 / 52.0) * std::log(0.85));
}

void BenefitSchedule::validate() const {
    if (kind == Kind::piecewise_exponential) {
        if (!(h0 > 0.0 && h0 <= 1.0)) throw std::invalid_argument("schedule: h0 must be in (0, 1]");
        if (!(s0 >= 0.0)) throw std::invalid_argument("schedule: s0 must be >= 0");
        if (!(delta > 0.0)) throw std::invalid_argument("schedule: delta must be > 0");
    } else {
        if (table.size() < 2) throw std::invalid_argument("schedule: table needs at least 2 knots");
        if (table.front().first != 0.0)
            throw std::invalid_argument("schedule: first table knot must be at week 0");
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (table[i].second < 0.0)
                throw std::invalid_argument("schedule: table rates must be non-negative");
            if (i > 0 && !(table[i].first > table[i - 1].first))
                throw std::invalid_argument("schedule: table weeks must be strictly increasing");
        }
    }
}

double BenefitSchedule::rate(double t) const {
    if (t < 0.0) throw std::invalid_argument("schedule: t must be >= 0");
    if (kind == Kind::piecewise_exponential) {
        if (t <= s0) return h0;
        if (std::isinf(delta)) return 0.0;
        return h0 * std::exp(-delta * (t - s0));
    }
    if (t >= table.back().first) return t == table.back().first ? table.back().second : 0.0;
    std::size_t i = 1;
    while (table[i].first < t) ++i;
    const auto& [t0, v0] = table[i - 1];
    const auto& [t1, v1] = table[i];
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

double lambda1_from_mean_spell(double weeks) {
    if (!(weeks > 0.0)) throw std::invalid_argument("lambda1 calibration: weeks must be > 0");
    return 1.0 / weeks;
}

double lambda1_from_tail_probability(double weeks, double prob) {
    if (!(weeks > 0.0)) throw std::invalid_argument("lambda1 calibration: weeks must be > 0");
    if (!(prob > 0.0 && prob < 1.0))
        throw std::invalid_argument("lambda1 calibration: prob must be in (0, 1)");
    return -std::log(prob) / weeks;
}

double discounted_benefit_H(const BenefitSchedule& schedule, double t, double r) {
    schedule.validate();
    if (t < 0.0) throw std::invalid_argument("H: t must be >= 0");
    if (r < 0.0) throw std::invalid_argument("H: r must be >= 0");
    if (t == 0.0) return 0.0;

    if (schedule.kind == BenefitSchedule::Kind::piecewise_exponential) {
        const double h0 = schedule.h0, s0 = schedule.s0, delta = schedule.delta;
        if (t <= s0) return h0 * expm1_ratio(r, t);
        double head = h0 * expm1_ratio(r, s0);
        if (std::isinf(delta)) return head;
        // integral over (s0, t] of h0 e^{delta s0} e^{-(r+delta) s}
        const double rd = r + delta;
        const double tail = h0 * std::exp(-r * s0) * (-std::expm1(-rd * (t - s0))) / rd;
        return head + tail;
    }

    double total = 0.0;
    const auto& table = schedule.table;
    for (std::size_t i = 0; i + 1 < table.size() && table[i].first < t; ++i) {
        const double t0 = table[i].first, t1 = std::min(table[i + 1].first, t);
        const double v0 = table[i].second, v1 = table[i + 1].second;
        const double m = (v1 - v0) / (table[i + 1].first - t0);
        total += linear_exp_integral(v0 - m * t0, m, r, t0, t1);
    }
    return total;
}

double beta_from_schedule(const BenefitSchedule& schedule, double lambda1, double r) {
    schedule.validate();
    if (!(lambda1 > 0.0)) throw std::invalid_argument("beta: lambda1 must be > 0");
    if (r < 0.0) throw std::invalid_argument("beta: r must be >= 0");

    // truncate where the Exp(lambda1) tail mass drops below 1e-13
    const double t_max = -std::log(1e-13) / lambda1;
    std::vector<double> pts{0.0};
    if (schedule.kind == BenefitSchedule::Kind::piecewise_exponential) {
        if (schedule.s0 > 0.0 && schedule.s0 < t_max) pts.push_back(schedule.s0);
    } else {
        for (const auto& [tk, _] : schedule.table)
            if (tk > 0.0 && tk < t_max) pts.push_back(tk);
    }
    pts.push_back(t_max);

    auto integrand = [&](double t) {
        return lambda1 * std::exp(-lambda1 * t) * discounted_benefit_H(schedule, t, r);
    };
    return adaptive_simpson_split(integrand, pts, 1e-12);
}

double beta_closed_form(double h0, double s0, double delta, double lambda1, double r) {
    if (!(h0 > 0.0 && h0 <= 1.0)) throw std::invalid_argument("beta: h0 must be in (0, 1]");
    if (!(s0 >= 0.0)) throw std::invalid_argument("beta: s0 must be >= 0");
    if (!(delta > 0.0)) throw std::invalid_argument("beta: delta must be > 0");
    if (!(lambda1 > 0.0)) throw std::invalid_argument("beta: lambda1 must be > 0");
    if (r < 0.0) throw std::invalid_argument("beta: r must be >= 0");

    const double rl = r + lambda1;
    if (std::isinf(s0)) return h0 / rl;
    const double e = std::exp(-rl * s0);
    const double tail = std::isinf(delta) ? 0.0 : h0 * e / (rl + delta);
    return h0 * (1.0 - e) / rl + tail;
}

} // namespace uistop
