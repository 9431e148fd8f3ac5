#include "uistop/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace uistop {

namespace {

using json = nlohmann::json;

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// key = value lines; '#' starts a comment; values are JSON scalars/arrays
// or bare words ("inf" accepted for s0_weeks).
std::map<std::string, json> parse_kv(const std::string& text) {
    std::map<std::string, json> doc;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string raw = trim(line.substr(eq + 1));
        if (key.empty() || raw.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key or value");
        if (doc.count(key))
            throw std::invalid_argument("config: duplicate key '" + key + "'");
        json v = json::parse(raw, nullptr, false);
        doc[key] = v.is_discarded() ? json(raw) : v;
    }
    return doc;
}

double as_number(const std::string& key, const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity"))
        return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("config: key '" + key + "' must be a number");
}

std::string fmt_full(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    static const std::map<std::string, int> known = {
        {"r", 0},       {"lambda0", 0}, {"mu", 0},      {"sigma", 0},   {"premium", 0},
        {"x0", 0},      {"beta", 0},    {"h0", 0},      {"s0_weeks", 0}, {"delta", 0},
        {"table", 0},   {"lambda1", 0}, {"lambda2", 0}, {"a_dag", 0},   {"seed", 0},
        {"paths", 0},   {"dt", 0},      {"horizon", 0}, {"output", 0},
    };
    auto doc = parse_kv(text);
    for (const auto& [k, v] : doc)
        if (!known.count(k)) throw std::invalid_argument("config: unknown key '" + k + "'");

    auto has = [&](const char* k) { return doc.count(k) != 0; };
    auto num = [&](const char* k) { return as_number(k, doc.at(k)); };
    auto require = [&](const char* k) {
        if (!has(k)) throw std::invalid_argument(std::string("config: missing key '") + k + "'");
        return num(k);
    };

    Scenario sc;
    sc.params.r = require("r");
    sc.params.lambda0 = require("lambda0");
    sc.params.mu = require("mu");
    sc.params.sigma = require("sigma");
    sc.params.premium = require("premium");
    sc.params.x0 = require("x0");
    if (has("lambda1")) sc.params.lambda1 = num("lambda1");
    if (has("lambda2") || has("a_dag")) {
        Mortality m;
        m.lambda2 = has("lambda2") ? num("lambda2") : 0.0;
        m.a_dag = has("a_dag") ? num("a_dag") : 0.0;
        sc.params.mortality = m;
    }

    const bool has_schedule = has("h0") || has("s0_weeks") || has("delta") || has("table");
    if (has("beta") == has_schedule)
        throw std::invalid_argument("config: exactly one of 'beta' or a schedule "
                                    "(h0/s0_weeks/delta or table) is required");
    if (has("beta")) {
        sc.params.beta = num("beta");
    } else {
        BenefitSchedule sched;
        if (has("table")) {
            if (has("h0") || has("s0_weeks") || has("delta"))
                throw std::invalid_argument("config: 'table' excludes h0/s0_weeks/delta");
            const json& t = doc.at("table");
            if (!t.is_array())
                throw std::invalid_argument("config: 'table' must be an array of [week, rate]");
            std::vector<std::pair<double, double>> knots;
            for (const auto& row : t) {
                if (!row.is_array() || row.size() != 2)
                    throw std::invalid_argument("config: table rows must be [week, rate]");
                knots.emplace_back(row[0].get<double>(), row[1].get<double>());
            }
            sched = BenefitSchedule::tabulated(std::move(knots));
        } else {
            sched = BenefitSchedule::piecewise_exponential(require("h0"), require("s0_weeks"),
                                                           require("delta"));
        }
        if (!has("lambda1"))
            throw std::invalid_argument("config: a schedule requires 'lambda1' to compute beta");
        sc.params.schedule = sched;
        sc.params.beta = beta_from_schedule(sched, *sc.params.lambda1, sc.params.r);
    }

    if (has("paths") || has("seed") || has("dt") || has("horizon")) {
        SimConfig sim;
        sim.dt = has("dt") ? num("dt") : 1.0;
        sim.n_paths = has("paths") ? static_cast<std::size_t>(num("paths")) : 10000;
        sim.seed = has("seed") ? static_cast<std::uint64_t>(num("seed")) : 0;
        sim.horizon = has("horizon") ? num("horizon")
                                     : default_horizon(sc.params.r_tilde());
        sc.sim = sim;
    }

    if (has("output")) {
        const std::string f = doc.at("output").get<std::string>();
        if (f == "text")
            sc.output = OutputFormat::text;
        else if (f == "csv")
            sc.output = OutputFormat::csv;
        else if (f == "json")
            sc.output = OutputFormat::json;
        else
            throw std::invalid_argument("config: output must be text, csv or json");
    }

    sc.params.validate();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    const ModelParams& p = sc.params;
    out << "r = " << fmt_full(p.r) << "\n";
    out << "lambda0 = " << fmt_full(p.lambda0) << "\n";
    out << "mu = " << fmt_full(p.mu) << "\n";
    out << "sigma = " << fmt_full(p.sigma) << "\n";
    out << "premium = " << fmt_full(p.premium) << "\n";
    out << "x0 = " << fmt_full(p.x0) << "\n";
    if (p.schedule) {
        const BenefitSchedule& s = *p.schedule;
        if (s.kind == BenefitSchedule::Kind::piecewise_exponential) {
            out << "h0 = " << fmt_full(s.h0) << "\n";
            out << "s0_weeks = " << fmt_full(s.s0) << "\n";
            out << "delta = " << fmt_full(s.delta) << "\n";
        } else {
            json t = json::array();
            for (const auto& [w, rate] : s.table) t.push_back({w, rate});
            out << "table = " << t.dump() << "\n";
        }
    } else {
        out << "beta = " << fmt_full(p.beta) << "\n";
    }
    if (p.lambda1) out << "lambda1 = " << fmt_full(*p.lambda1) << "\n";
    if (p.mortality) {
        out << "lambda2 = " << fmt_full(p.mortality->lambda2) << "\n";
        out << "a_dag = " << fmt_full(p.mortality->a_dag) << "\n";
    }
    if (sc.sim) {
        out << "dt = " << fmt_full(sc.sim->dt) << "\n";
        out << "paths = " << sc.sim->n_paths << "\n";
        out << "seed = " << sc.sim->seed << "\n";
        out << "horizon = " << fmt_full(sc.sim->horizon) << "\n";
    }
    switch (sc.output) {
        case OutputFormat::text: out << "output = text\n"; break;
        case OutputFormat::csv: out << "output = csv\n"; break;
        case OutputFormat::json: out << "output = json\n"; break;
    }
    return out.str();
}

} // namespace uistop
