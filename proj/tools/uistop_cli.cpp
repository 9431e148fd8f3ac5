// uistop: closed-form unemployment-insurance entry timing, with Monte-Carlo
// and grid-search verification. Subcommands: solve, simulate, estimate,
// decide, sensitivity, utility, schedule.

#include "uistop/estimation.hpp"
#include "uistop/hitting.hpp"
#include "uistop/model.hpp"
#include "uistop/montecarlo.hpp"
#include "uistop/scenario.hpp"
#include "uistop/sensitivity.hpp"
#include "uistop/utility.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;

// All human-readable numbers carry 7 significant digits.
std::string fmt7(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.7g", v);
    return buf;
}

json json_num(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    if (std::isnan(v)) return json("nan");
    return json(v);
}

double annualized(double weekly_rate) { return std::exp(365.0 / 7.0 * weekly_rate) - 1.0; }

struct CsvSeries {
    std::vector<double> weeks, wages;
};

CsvSeries read_wage_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open csv '" + path + "'");
    CsvSeries out;
    std::string line;
    bool first = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b))
            throw std::invalid_argument("csv line " + std::to_string(lineno) +
                                        ": expected week,wage");
        if (first && (a == "week" || a == "\"week\"")) {
            first = false;
            continue;
        }
        first = false;
        try {
            out.weeks.push_back(std::stod(a));
            out.wages.push_back(std::stod(b));
        } catch (const std::exception&) {
            throw std::invalid_argument("csv line " + std::to_string(lineno) + ": bad number");
        }
    }
    if (out.weeks.empty()) throw std::invalid_argument("csv '" + path + "' has no data rows");
    return out;
}

uistop::Scenario load_config(const std::string& path) { return uistop::load_scenario(path); }

int cmd_solve(const std::string& config_path, bool oracle, std::size_t grid_n,
              std::optional<std::string> format) {
    using namespace uistop;
    Scenario sc = load_config(config_path);
    const Solution sol = solve(sc.params);
    const double x = sc.params.x0;
    const double v = value(x, sol);

    OutputFormat fmt = sc.output;
    if (format) fmt = *format == "json" ? OutputFormat::json
                                        : (*format == "csv" ? OutputFormat::csv : OutputFormat::text);

    double hit_prob = 1.0, mean_time = 0.0;
    if (sol.regime == Regime::stochastic) {
        const ThresholdPolicy pol = make_policy(sc.params, sol.derived, sol.b_star);
        hit_prob = hit_probability(pol);
        mean_time = mean_hitting_time(pol);
    } else {
        const DeterministicSolution ds = deterministic_threshold(sc.params);
        hit_prob = std::isinf(ds.t_star) ? 0.0 : 1.0;
        mean_time = ds.t_star;
    }

    std::optional<GridMaxResult> grid;
    double grid_step = 0.0;
    if (oracle) {
        if (sol.regime != Regime::stochastic)
            throw std::invalid_argument("solve --oracle needs sigma > 0");
        GridSpec spec;
        spec.b_min = 0.0;
        spec.b_max = std::max(2.5 * sol.b_star, 2.0 * x);
        spec.n = grid_n;
        grid = maximize_enpv(sc.params, sol.derived, spec);
        grid_step = (spec.b_max - spec.b_min) / static_cast<double>(spec.n - 1);
    }

    if (fmt == OutputFormat::json) {
        json out;
        out["regime"] = sol.regime == Regime::stochastic ? "stochastic" : "deterministic";
        out["r_tilde"] = sol.derived.r_tilde;
        out["beta1"] = sol.derived.beta1;
        out["q_star"] = json_num(sol.derived.q_star);
        out["b_star"] = sol.b_star;
        out["x0"] = x;
        out["value"] = v;
        out["gain"] = sol.derived.beta1 * x - sc.params.premium;
        out["hit_probability"] = hit_prob;
        out["mean_hitting_time_weeks"] = json_num(mean_time);
        out["annual_inflation"] = annualized(sc.params.r);
        if (grid) {
            out["oracle_b_hat"] = grid->b_hat;
            out["oracle_value"] = grid->value;
            out["oracle_grid_step"] = grid_step;
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    if (fmt == OutputFormat::csv) {
        std::cout << "quantity,value\n";
        std::cout << "r_tilde," << fmt7(sol.derived.r_tilde) << "\n";
        std::cout << "beta1," << fmt7(sol.derived.beta1) << "\n";
        std::cout << "q_star," << fmt7(sol.derived.q_star) << "\n";
        std::cout << "b_star," << fmt7(sol.b_star) << "\n";
        std::cout << "value," << fmt7(v) << "\n";
        std::cout << "hit_probability," << fmt7(hit_prob) << "\n";
        std::cout << "mean_hitting_time_weeks," << fmt7(mean_time) << "\n";
        if (grid) {
            std::cout << "oracle_b_hat," << fmt7(grid->b_hat) << "\n";
            std::cout << "oracle_value," << fmt7(grid->value) << "\n";
        }
        return 0;
    }

    std::cout << "regime: " << (sol.regime == Regime::stochastic ? "stochastic" : "deterministic")
              << "\n";
    std::cout << "r_tilde = " << fmt7(sol.derived.r_tilde)
              << " per week (annual inflation " << fmt7(100.0 * annualized(sc.params.r))
              << "%)\n";
    std::cout << "beta1 = " << fmt7(sol.derived.beta1) << "\n";
    std::cout << "q_star = " << fmt7(sol.derived.q_star) << "\n";
    std::cout << "b_star = " << fmt7(sol.b_star) << "\n";
    std::cout << "v(" << fmt7(x) << ") = " << fmt7(v) << "\n";
    std::cout << "hit_probability = " << fmt7(hit_prob) << "\n";
    std::cout << "mean_hitting_time = " << fmt7(mean_time) << " weeks\n";
    if (grid) {
        std::cout << "oracle b_hat = " << fmt7(grid->b_hat) << " (grid step " << fmt7(grid_step)
                  << ", analytic b_star = " << fmt7(sol.b_star) << ")\n";
        std::cout << "oracle value = " << fmt7(grid->value) << "\n";
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, std::vector<double> bs,
                 std::optional<std::size_t> paths, std::optional<double> dt,
                 std::optional<double> horizon, std::optional<std::uint64_t> seed, int threads) {
    using namespace uistop;
    Scenario sc = load_config(config_path);
    SimConfig cfg = sc.sim.value_or(SimConfig{});
    if (!sc.sim) {
        cfg.n_paths = 10000;
        cfg.horizon = default_horizon(sc.params.r_tilde());
    }
    if (paths) cfg.n_paths = *paths;
    if (dt) cfg.dt = *dt;
    if (horizon) cfg.horizon = *horizon;
    if (seed) cfg.seed = *seed;
    cfg.threads = threads;

    derive(sc.params); // simulation needs the stochastic regime; fail before any output
    if (bs.empty()) bs.push_back(solve(sc.params).b_star);

    std::cout << "b,estimate,std_error,hit_fraction,mean_hit_time\n";
    for (double b : bs) {
        const McEstimate e = mc_enpv(sc.params, b, cfg);
        const McHittingStats h = mc_hitting_stats(sc.params, b, cfg);
        if (e.truncation_warning)
            std::cerr << "warning: horizon too short, truncation bias bound "
                      << fmt7(e.truncation_bias_bound) << "\n";
        std::cout << fmt7(b) << ',' << fmt7(e.estimate) << ',' << fmt7(e.std_error) << ','
                  << fmt7(h.hit_fraction) << ',' << fmt7(h.mean_hit_time) << "\n";
    }
    return 0;
}

int cmd_estimate(const std::string& csv_path) {
    using namespace uistop;
    const CsvSeries s = read_wage_csv(csv_path);
    const EstimateReport rep = estimate(s.weeks, s.wages);
    json out;
    out["a_hat"] = rep.a_hat;
    out["sigma2_hat"] = rep.sigma2_hat;
    out["mu_hat"] = rep.mu_hat;
    out["var_a_hat"] = rep.var_a_hat;
    out["var_sigma2_hat"] = rep.var_sigma2_hat;
    out["var_mu_hat"] = rep.var_mu_hat;
    out["n"] = rep.n;
    out["T"] = rep.T;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_decide(const std::string& config_path, const std::string& csv_path, double alpha,
               bool trace) {
    using namespace uistop;
    Scenario sc = load_config(config_path);
    const Solution sol = solve(sc.params);
    const CsvSeries s = read_wage_csv(csv_path);

    SequentialDecision proc(sol.b_star, alpha);
    std::optional<Decision> decision;
    for (std::size_t i = 0; i < s.weeks.size() && !decision; ++i) {
        const int week = static_cast<int>(std::llround(s.weeks[i]));
        decision = proc.observe(week, s.wages[i]);
        if (trace && !decision)
            std::cout << "week " << week << ": wage " << fmt7(s.wages[i]) << " < b* "
                      << fmt7(sol.b_star) << ", keep waiting\n";
    }
    Decision final = decision.value_or(
        Decision{Action::keep_waiting, static_cast<int>(std::llround(s.weeks.back()))});
    const char* what = final.action == Action::buy_now_hit
                           ? "buy_now_hit"
                           : (final.action == Action::buy_now_rejected ? "buy_now_rejected"
                                                                       : "keep_waiting");
    std::cout << "decision: " << what << " at week " << final.week << " (b* = "
              << fmt7(sol.b_star) << ", alpha = " << fmt7(alpha) << ")\n";
    return 0;
}

int cmd_sensitivity(const std::string& config_path, bool lambda_star_mode, bool isoline_mode,
                    const std::string& target, double level, const std::string& l0_range,
                    const std::string& mu_range, std::size_t iso_grid_n) {
    using namespace uistop;
    Scenario sc = load_config(config_path);
    const double x = sc.params.x0;

    if (lambda_star_mode) {
        const double ls = lambda_star(sc.params, x);
        std::cout << "lambda_star = " << fmt7(ls) << "\n";
        if (std::isfinite(ls)) {
            ModelParams p = sc.params;
            p.lambda0 = ls;
            std::cout << "b_star(lambda_star) = " << fmt7(solve(p).b_star) << "\n";
        }
        return 0;
    }

    if (isoline_mode) {
        auto parse_range = [](const std::string& s, const char* name) {
            const auto colon = s.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument(std::string("bad range for ") + name +
                                            " (want lo:hi)");
            return std::pair<double, double>{std::stod(s.substr(0, colon)),
                                             std::stod(s.substr(colon + 1))};
        };
        IsolineWindow w;
        std::tie(w.lambda0_min, w.lambda0_max) = parse_range(l0_range, "--lambda0-range");
        std::tie(w.mu_min, w.mu_max) = parse_range(mu_range, "--mu-range");
        w.n_lambda0 = w.n_mu = iso_grid_n;
        const IsolineTarget tg =
            target == "value" ? IsolineTarget::value : IsolineTarget::b_star;
        const auto pts = isolines(sc.params, x, tg, level, w);
        std::cout << "level,lambda0,mu\n";
        for (const auto& pt : pts)
            std::cout << fmt7(level) << ',' << fmt7(pt.lambda0) << ',' << fmt7(pt.mu) << "\n";
        return 0;
    }

    const SensitivityReport rep = derivatives(sc.params, x);
    std::cout << "quantity,derivative,increment_1pct\n";
    std::cout << "b_star_wrt_mu," << fmt7(rep.db_dmu) << ',' << fmt7(rep.inc_b_mu) << "\n";
    std::cout << "value_wrt_mu," << fmt7(rep.dv_dmu) << ',' << fmt7(rep.inc_v_mu) << "\n";
    std::cout << "b_star_wrt_lambda0," << fmt7(rep.db_dlambda0) << ',' << fmt7(rep.inc_b_lambda0)
              << "\n";
    std::cout << "value_wrt_lambda0," << fmt7(rep.dv_dlambda0) << ',' << fmt7(rep.inc_v_lambda0)
              << "\n";
    std::cout << "q_star_wrt_mu," << fmt7(rep.dq_dmu) << ",\n";
    std::cout << "q_star_wrt_lambda0," << fmt7(rep.dq_dlambda0) << ",\n";
    return 0;
}

int cmd_utility(const std::string& config_path, double kappa, const std::string& variant,
                std::optional<double> consumption) {
    using namespace uistop;
    Scenario sc = load_config(config_path);
    const DerivedParams d = derive(sc.params);
    const double x = sc.params.x0;

    UtilityConfig cfg;
    cfg.kappa = kappa;
    if (variant == "raw")
        cfg.variant = UtilityVariant::hit_prob_raw;
    else if (variant == "powered")
        cfg.variant = UtilityVariant::hit_prob_powered;
    else if (variant == "mean-exp")
        cfg.variant = UtilityVariant::mean_time_exp;
    else if (variant == "mean-powered")
        cfg.variant = UtilityVariant::mean_time_powered;
    else
        throw std::invalid_argument("utility: variant must be raw, powered, mean-exp or "
                                    "mean-powered");

    double gamma = 0.0;
    if (consumption) {
        if (!sc.params.lambda1)
            throw std::invalid_argument("utility: --consumption needs lambda1 in the config");
        gamma = consumption_gamma(*consumption, sc.params.r, sc.params.lambda0,
                                  *sc.params.lambda1);
    }

    json out;
    out["b_dag"] = json_num(threshold_for(sc.params, d, cfg));
    out["u_dag"] = json_num(value_for(sc.params, d, cfg, x));
    out["kappa_dag"] = json_num(kappa_dag(sc.params, d, x));
    out["gamma"] = json_num(gamma);
    out["p_max"] = json_num(max_premium(sc.params, x, gamma));
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_schedule(const std::string& config_path, std::optional<double> at_t) {
    using namespace uistop;
    Scenario sc = load_config(config_path);
    if (!sc.params.schedule)
        throw std::invalid_argument("schedule: the config does not define a schedule");
    const BenefitSchedule& sched = *sc.params.schedule;
    const double lambda1 = sc.params.lambda1.value();

    std::cout << "beta_quadrature = " << fmt7(beta_from_schedule(sched, lambda1, sc.params.r))
              << "\n";
    if (sched.kind == BenefitSchedule::Kind::piecewise_exponential)
        std::cout << "beta_closed_form = "
                  << fmt7(beta_closed_form(sched.h0, sched.s0, sched.delta, lambda1, sc.params.r))
                  << "\n";
    if (at_t)
        std::cout << "H(" << fmt7(*at_t)
                  << ") = " << fmt7(discounted_benefit_H(sched, *at_t, sc.params.r)) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"unemployment-insurance optimal entry: closed forms with Monte-Carlo and "
                 "grid-search verification"};
    app.require_subcommand(1);

    std::string config_path, csv_path;
    bool oracle = false, trace = false;
    std::size_t grid_n = 50001;
    std::size_t iso_grid_n = 400;
    std::optional<std::string> format;
    std::vector<double> bs;
    std::optional<std::size_t> paths;
    std::optional<double> dt, horizon, consumption;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    double alpha = 0.05, kappa = 0.0, level = 0.0;
    std::string variant = "powered", target = "b_star";
    std::string l0_range = "0.002:0.05", mu_range = "-0.002:0.002";
    bool lambda_star_mode = false, isoline_mode = false;
    std::optional<double> at_t;

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config file")->required();
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "closed-form threshold and value");
    add_config(solve_cmd);
    solve_cmd->add_flag("--oracle", oracle, "also run the grid-search maximizer");
    solve_cmd->add_option("--grid-n", grid_n, "oracle grid size");
    solve_cmd->add_option("--format", format, "text|csv|json");

    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo threshold statistics (CSV)");
    add_config(sim_cmd);
    sim_cmd->add_option("--b", bs, "threshold(s); default b_star")->delimiter(',');
    sim_cmd->add_option("--paths", paths, "number of paths");
    sim_cmd->add_option("--dt", dt, "time step, weeks");
    sim_cmd->add_option("--horizon", horizon, "horizon, weeks");
    sim_cmd->add_option("--seed", seed, "64-bit seed");
    sim_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

    CLI::App* est_cmd = app.add_subcommand("estimate", "drift/volatility estimates from CSV");
    est_cmd->add_option("--csv", csv_path, "week,wage series")->required();

    CLI::App* dec_cmd = app.add_subcommand("decide", "sequential buy decision over a CSV path");
    add_config(dec_cmd);
    dec_cmd->add_option("--csv", csv_path, "week,wage series")->required();
    dec_cmd->add_option("--alpha", alpha, "per-test significance level");
    dec_cmd->add_flag("--trace", trace, "print every week");

    CLI::App* sens_cmd = app.add_subcommand("sensitivity", "comparative statics (CSV)");
    add_config(sens_cmd);
    sens_cmd->add_flag("--lambda-star", lambda_star_mode, "critical unemployment rate");
    sens_cmd->add_flag("--isoline", isoline_mode, "emit a level curve");
    sens_cmd->add_option("--target", target, "b_star|value");
    sens_cmd->add_option("--level", level, "isoline level");
    sens_cmd->add_option("--lambda0-range", l0_range, "lo:hi");
    sens_cmd->add_option("--mu-range", mu_range, "lo:hi");
    sens_cmd->add_option("--grid", iso_grid_n, "isoline grid points per axis");

    CLI::App* util_cmd = app.add_subcommand("utility", "utility-modified thresholds (JSON)");
    add_config(util_cmd);
    util_cmd->add_option("--kappa", kappa, "preference weight");
    util_cmd->add_option("--variant", variant, "raw|powered|mean-exp|mean-powered");
    util_cmd->add_option("--consumption", consumption, "consumption rate, currency/week");

    CLI::App* sch_cmd = app.add_subcommand("schedule", "benefit schedule inspection");
    add_config(sch_cmd);
    sch_cmd->add_option("--t", at_t, "report H(t) at this week");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help() << "\n";
        return 2;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(config_path, oracle, grid_n, format);
        if (sim_cmd->parsed())
            return cmd_simulate(config_path, bs, paths, dt, horizon, seed, threads);
        if (est_cmd->parsed()) return cmd_estimate(csv_path);
        if (dec_cmd->parsed()) return cmd_decide(config_path, csv_path, alpha, trace);
        if (sens_cmd->parsed())
            return cmd_sensitivity(config_path, lambda_star_mode, isoline_mode, target, level,
                                   l0_range, mu_range, iso_grid_n);
        if (util_cmd->parsed()) return cmd_utility(config_path, kappa, variant, consumption);
        if (sch_cmd->parsed()) return cmd_schedule(config_path, at_t);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
