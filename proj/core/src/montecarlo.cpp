#include "uistop/montecarlo.hpp"

#include "uistop/rng.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace uistop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Neumaier compensated sum; block results are reduced in block order so the
// total is independent of the thread count.
struct CompSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double t = s + v;
        c += std::fabs(s) >= std::fabs(v) ? (s - t) + v : (v - t) + s;
        s = t;
    }
    double get() const { return s + c; }
};

struct BlockAccum {
    CompSum pay, pay2;   // discounted payoff and its square
    CompSum tsum, tsum2; // hit times (hits only)
    std::uint64_t hits = 0;
};

struct SimContext {
    double ell;    // log(b/x), > 0
    double a;      // mu - sigma^2/2
    double sigma;
    double horizon;
    double r_tilde;
    double beta1;
    double premium;
    double x0;
    double dt;
    std::uint64_t seed;

    // step-size ladder: dt * 2^j, usable only when the barrier is at least
    // 6.5 sigma-steps away, so coarsening cannot create or miss crossings
    int levels = 1;
    double dt_j[40];
    double adt_j[40];
    double sdt_j[40];
    double thr_j[40];
};

SimContext make_context(const ModelParams& p, const DerivedParams& d, double b,
                        const SimConfig& cfg) {
    SimContext ctx;
    ctx.ell = std::log(b / p.x0);
    ctx.a = p.mu - 0.5 * p.sigma * p.sigma;
    ctx.sigma = p.sigma;
    ctx.horizon = cfg.horizon;
    ctx.r_tilde = d.r_tilde;
    ctx.beta1 = d.beta1;
    ctx.premium = p.premium;
    ctx.x0 = p.x0;
    ctx.dt = cfg.dt;
    ctx.seed = cfg.seed;

    const double dt_cap = std::max(cfg.dt, std::min(cfg.max_step, cfg.horizon));
    int levels = 1;
    while (levels < 40 && cfg.dt * std::ldexp(1.0, levels) <= dt_cap) ++levels;
    ctx.levels = levels;
    for (int j = 0; j < levels; ++j) {
        const double dt = cfg.dt * std::ldexp(1.0, j);
        ctx.dt_j[j] = dt;
        ctx.adt_j[j] = ctx.a * dt;
        ctx.sdt_j[j] = ctx.sigma * std::sqrt(dt);
        ctx.thr_j[j] = 6.5 * ctx.sdt_j[j] + std::fabs(ctx.adt_j[j]);
    }
    return ctx;
}

struct PathOutcome {
    bool hit = false;
    double time = 0.0;
    double log_level = 0.0; // log(X_tau / x)
};

PathOutcome run_path(const SimContext& ctx, std::uint64_t path_index) {
    Rng rng(ctx.seed, path_index);
    double s = 0.0, t = 0.0;
    int j = 0;
    const int top = ctx.levels - 1;
    for (;;) {
        if (s >= ctx.ell) return PathOutcome{true, t, s};
        if (t >= ctx.horizon) return PathOutcome{false, t, s};
        const double dist = ctx.ell - s;
        while (j > 0 && dist < ctx.thr_j[j]) --j;
        while (j < top && dist >= ctx.thr_j[j + 1]) ++j;
        if (t + ctx.dt_j[j] > ctx.horizon) {
            const double rem = ctx.horizon - t;
            s += ctx.a * rem + ctx.sigma * std::sqrt(rem) * rng.normal();
            t = ctx.horizon;
        } else {
            s += ctx.adt_j[j] + ctx.sdt_j[j] * rng.normal();
            t += ctx.dt_j[j];
        }
    }
}

std::vector<BlockAccum> run_blocks(const SimContext& ctx, std::size_t n_paths, int threads) {
    constexpr std::size_t kBlock = 2048;
    const std::size_t n_blocks = (n_paths + kBlock - 1) / kBlock;
    std::vector<BlockAccum> blocks(n_blocks);

    auto worker = [&](std::atomic<std::size_t>& next) {
        for (;;) {
            const std::size_t bi = next.fetch_add(1);
            if (bi >= n_blocks) return;
            BlockAccum acc;
            const std::size_t lo = bi * kBlock;
            const std::size_t hi = std::min(lo + kBlock, n_paths);
            for (std::size_t i = lo; i < hi; ++i) {
                const PathOutcome out = run_path(ctx, i);
                double pay = 0.0;
                if (out.hit) {
                    pay = std::exp(-ctx.r_tilde * out.time) *
                          (ctx.beta1 * ctx.x0 * std::exp(out.log_level) - ctx.premium);
                    ++acc.hits;
                    acc.tsum.add(out.time);
                    acc.tsum2.add(out.time * out.time);
                }
                acc.pay.add(pay);
                acc.pay2.add(pay * pay);
            }
            blocks[bi] = acc;
        }
    };

    int n_threads = threads > 0 ? threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = static_cast<int>(std::min<std::size_t>(n_threads, n_blocks));

    std::atomic<std::size_t> next{0};
    if (n_threads == 1) {
        worker(next);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int k = 0; k < n_threads; ++k) pool.emplace_back([&] { worker(next); });
        for (auto& th : pool) th.join();
    }
    return blocks;
}

struct Totals {
    double pay = 0.0, pay2 = 0.0, tsum = 0.0, tsum2 = 0.0;
    std::uint64_t hits = 0;
};

Totals reduce(const std::vector<BlockAccum>& blocks) {
    CompSum pay, pay2, tsum, tsum2;
    std::uint64_t hits = 0;
    for (const auto& b : blocks) {
        pay.add(b.pay.get());
        pay2.add(b.pay2.get());
        tsum.add(b.tsum.get());
        tsum2.add(b.tsum2.get());
        hits += b.hits;
    }
    return Totals{pay.get(), pay2.get(), tsum.get(), tsum2.get(), hits};
}

void check_common(const ModelParams& params, double b, const SimConfig& cfg) {
    params.validate();
    cfg.validate();
    if (!(b >= 0.0)) throw std::invalid_argument("mc: b must be >= 0");
    if (!(params.x0 > 0.0)) throw std::invalid_argument("mc: x0 must be > 0");
}

} // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("sim: dt must be > 0");
    if (!(horizon >= dt)) throw std::invalid_argument("sim: horizon must be >= dt");
    if (n_paths < 1) throw std::invalid_argument("sim: n_paths must be >= 1");
    if (!(max_step > 0.0)) throw std::invalid_argument("sim: max_step must be > 0");
}

double default_horizon(double r_tilde) {
    if (!(r_tilde > 0.0)) throw std::invalid_argument("default_horizon: r_tilde must be > 0");
    return std::ceil(14.0 / r_tilde);
}

PathSample sample_path(const ModelParams& params, const SimConfig& cfg,
                       std::uint64_t path_index) {
    params.validate();
    cfg.validate();
    if (!(params.x0 > 0.0)) throw std::invalid_argument("sample_path: x0 must be > 0");

    Rng rng(cfg.seed, path_index);
    PathSample out;
    out.tau0 = -std::log(1.0 - rng.uniform()) / params.lambda0;
    out.tau1 = params.lambda1 ? -std::log(1.0 - rng.uniform()) / *params.lambda1 : kNaN;

    const auto steps = static_cast<std::size_t>(std::ceil(cfg.horizon / cfg.dt - 1e-12));
    out.times.resize(steps + 1);
    out.wages.resize(steps + 1);
    const double a_dt = (params.mu - 0.5 * params.sigma * params.sigma) * cfg.dt;
    const double s_dt = params.sigma * std::sqrt(cfg.dt);
    double logw = std::log(params.x0);
    out.times[0] = 0.0;
    out.wages[0] = params.x0;
    for (std::size_t i = 1; i <= steps; ++i) {
        logw += a_dt + s_dt * rng.normal();
        out.times[i] = cfg.dt * static_cast<double>(i);
        out.wages[i] = std::exp(logw);
    }
    return out;
}

McEstimate mc_enpv(const ModelParams& params, double b, const SimConfig& cfg) {
    check_common(params, b, cfg);
    const DerivedParams d = derive(params);

    McEstimate res;
    res.n_paths = cfg.n_paths;
    const double tail = std::exp(-d.r_tilde * cfg.horizon);
    res.truncation_warning = tail > 1e-6;
    res.truncation_bias_bound = tail * d.beta1 * std::max(b, params.x0);

    if (b <= params.x0) { // immediate entry, no sampling needed
        res.estimate = d.beta1 * params.x0 - params.premium;
        res.std_error = 0.0;
        res.truncation_warning = false;
        res.truncation_bias_bound = 0.0;
        return res;
    }

    const SimContext ctx = make_context(params, d, b, cfg);
    const Totals tot = reduce(run_blocks(ctx, cfg.n_paths, cfg.threads));
    const double n = static_cast<double>(cfg.n_paths);
    res.estimate = tot.pay / n;
    if (cfg.n_paths > 1) {
        const double var = std::max(0.0, (tot.pay2 - n * res.estimate * res.estimate) / (n - 1.0));
        res.std_error = std::sqrt(var / n);
    }
    return res;
}

McHittingStats mc_hitting_stats(const ModelParams& params, double b, const SimConfig& cfg) {
    check_common(params, b, cfg);
    const DerivedParams d = derive(params);

    McHittingStats res;
    res.n_paths = cfg.n_paths;
    const double tail = std::exp(-d.r_tilde * cfg.horizon);
    res.truncation_warning = tail > 1e-6;
    res.truncation_bias_bound = tail * d.beta1 * std::max(b, params.x0);

    if (b <= params.x0) {
        res.hit_fraction = 1.0;
        res.n_hit = cfg.n_paths;
        res.mean_hit_time = 0.0;
        res.truncation_warning = false;
        res.truncation_bias_bound = 0.0;
        return res;
    }

    const SimContext ctx = make_context(params, d, b, cfg);
    const Totals tot = reduce(run_blocks(ctx, cfg.n_paths, cfg.threads));
    const double n = static_cast<double>(cfg.n_paths);
    res.n_hit = tot.hits;
    res.hit_fraction = static_cast<double>(tot.hits) / n;
    res.hit_fraction_se = std::sqrt(res.hit_fraction * (1.0 - res.hit_fraction) / n);
    if (tot.hits == 0) {
        res.mean_hit_time = kNaN;
        res.mean_hit_time_se = kNaN;
        return res;
    }
    const double nh = static_cast<double>(tot.hits);
    res.mean_hit_time = tot.tsum / nh;
    if (tot.hits > 1) {
        const double var =
            std::max(0.0, (tot.tsum2 - nh * res.mean_hit_time * res.mean_hit_time) / (nh - 1.0));
        res.mean_hit_time_se = std::sqrt(var / nh);
    }
    return res;
}

} // namespace uistop
