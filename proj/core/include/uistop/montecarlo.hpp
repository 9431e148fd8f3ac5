#pragma once

/**
 * @file montecarlo.hpp
 * @brief Exact-increment simulation of the wage process and threshold
 *        strategies; the stochastic oracle for the analytic formulas.
 *
 * Wages are sampled exactly on the grid via lognormal increments (no Euler
 * error in the marginal law). Hitting is detected at grid points only; the
 * residual continuous-monitoring bias shrinks like sigma*sqrt(dt) and is
 * controlled by the dt-halving stability test. Away from the barrier the
 * step is coarsened (capped so that crossing within one step would be a
 * >= 6.5 sigma move), which leaves the detected-hit law unchanged at the
 * configured resolution; cfg.dt is the monitoring resolution near the
 * barrier. Each path draws from its own (seed, path_index) stream, so
 * results are bit-identical for any thread count.
 */

#include "uistop/model.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace uistop {

struct SimConfig {
    double dt = 1.0;          // time step, weeks
    double horizon = 0.0;     // weeks
    std::size_t n_paths = 1;  // number of paths
    std::uint64_t seed = 0;   // stream seed
    int threads = 0;          // 0 = hardware concurrency
    double max_step = 4.0;    // far-field coarsening cap, weeks; set = dt to disable

    void validate() const;
};

// Default horizon: e^{-r_tilde T} < 1e-6, i.e. T = ceil(14 / r_tilde).
double default_horizon(double r_tilde);

struct PathSample {
    std::vector<double> times; // week grid
    std::vector<double> wages; // wage per grid point
    double tau0 = 0.0;         // loss-of-job time ~ Exp(lambda0)
    double tau1 = 0.0;         // unemployment spell ~ Exp(lambda1); NaN if lambda1 unknown
};

// One exact path on the uniform grid, from stream (cfg.seed, path_index).
PathSample sample_path(const ModelParams& params, const SimConfig& cfg,
                       std::uint64_t path_index = 0);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    bool truncation_warning = false;   // e^{-r_tilde horizon} > 1e-6
    double truncation_bias_bound = 0.0;
};

// Path-wise eNPV of the threshold strategy tau_b: pays
// e^{-r_tilde tau}(beta1 X_tau - P) at the first grid point with X >= b,
// zero when the horizon is exhausted.
McEstimate mc_enpv(const ModelParams& params, double b, const SimConfig& cfg);

struct McHittingStats {
    double hit_fraction = 0.0;
    double hit_fraction_se = 0.0;
    double mean_hit_time = 0.0; // conditional on hitting; NaN when no path hit
    double mean_hit_time_se = 0.0;
    std::size_t n_hit = 0;
    std::size_t n_paths = 0;
    bool truncation_warning = false;
    double truncation_bias_bound = 0.0;
};

// Empirical counterparts of the hitting-time law at threshold b.
McHittingStats mc_hitting_stats(const ModelParams& params, double b, const SimConfig& cfg);

} // namespace uistop
