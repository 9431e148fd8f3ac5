#pragma once

/**
 * @file scenario.hpp
 * @brief Flat key/value scenario documents: the config surface shared by
 *        the library and the CLI.
 *
 * Recognized keys: r, lambda0, mu, sigma, premium, x0; exactly one of
 * `beta` or a schedule (`h0`, `s0_weeks`, `delta`, or `table` as a JSON
 * array of [week, rate] pairs); optional lambda1, lambda2, a_dag; optional
 * simulation keys seed, paths, dt, horizon; optional `output` (text|csv|json).
 */

#include "uistop/model.hpp"
#include "uistop/montecarlo.hpp"

#include <optional>
#include <string>

namespace uistop {

enum class OutputFormat { text, csv, json };

struct Scenario {
    ModelParams params;
    std::optional<SimConfig> sim;
    OutputFormat output = OutputFormat::text;
};

// Parses a scenario document; throws std::invalid_argument with a one-line
// message on unknown keys, bad values or missing/conflicting beta-schedule.
// When a schedule is given, beta is computed from it (lambda1 required).
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Canonical serialization; parse_scenario(serialize_scenario(s)) yields a
// scenario with identical solver output.
std::string serialize_scenario(const Scenario& scenario);

} // namespace uistop
