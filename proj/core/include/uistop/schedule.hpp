#pragma once

/**
 * @file schedule.hpp
 * @brief Benefit schedules h(s) and the discounted-benefit constant beta.
 *
 * beta = E[ integral_0^tau1 e^{-r s} h(s) ds ] with tau1 ~ Exp(lambda1),
 * i.e. the expected discounted benefit per unit of final wage. All rates
 * are per week.
 */

#include <limits>
#include <utility>
#include <vector>

namespace uistop {

struct BenefitSchedule {
    enum class Kind { piecewise_exponential, tabulated };

    Kind kind = Kind::piecewise_exponential;

    // piecewise-exponential: h(s) = h0 on [0, s0], h0*exp(-delta*(s-s0)) after.
    double h0 = 1.0;     // fraction of final wage per week, in (0, 1]
    double s0 = 0.0;     // grace period, weeks (may be +inf)
    double delta = 1.0;  // decay rate per week, > 0 (may be +inf)

    // tabulated: (time-week, rate) knots, linearly interpolated, zero past
    // the last knot. First knot must sit at time 0.
    std::vector<std::pair<double, double>> table;

    static BenefitSchedule piecewise_exponential(double h0, double s0_weeks, double delta);
    static BenefitSchedule tabulated(std::vector<std::pair<double, double>> knots);

    // French UI system of the 1990s: 57.4% of the final wage for 8 months,
    // then declining by 15% every 3 months.
    static BenefitSchedule french_1990s();

    // Benefit rate h(t) at time t >= 0 since loss of job.
    double rate(double t) const;

    void validate() const;
};

// Calibrations of the re-employment rate lambda1 to a benefit term of
// `weeks`: either matching the mean spell E[tau1] = weeks, or a tail
// condition P(tau1 > weeks) = prob. Neither is a default anywhere.
double lambda1_from_mean_spell(double weeks);
double lambda1_from_tail_probability(double weeks, double prob);

// H(t) = integral_0^t e^{-r s} h(s) ds (closed form per segment).
double discounted_benefit_H(const BenefitSchedule& schedule, double t, double r);

// beta = integral_0^inf lambda1 e^{-lambda1 t} H(t) dt by adaptive Simpson,
// truncated where the exponential tail mass is below 1e-13.
double beta_from_schedule(const BenefitSchedule& schedule, double lambda1, double r);

// Closed form of beta for the piecewise-exponential schedule.
double beta_closed_form(double h0, double s0, double delta, double lambda1, double r);

} // namespace uistop
