#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "formation/signed_graph.hpp"

namespace formation {

/// Periodic mode switching: mode pattern[(k / dwell) mod pattern size] is
/// active at step k. Pattern entries are 1-based mode ids, matching the
/// config file.
struct ScheduleSpec {
    int dwell = 1;
    std::vector<int> pattern;

    bool operator==(const ScheduleSpec&) const = default;
};

struct AngleProfileSpec {
    enum class Kind { paper_example, constant, piecewise };

    Kind kind = Kind::constant;
    std::vector<double> values;  // constant: one angle per agent
    // piecewise: per agent, (time, angle) breakpoints; constant from the
    // last breakpoint at or before t, first breakpoint must be at t = 0
    std::vector<std::vector<std::pair<double, double>>> tables;

    bool operator==(const AngleProfileSpec&) const = default;
};

struct HPolicySpec {
    enum class Kind { constant, uniform_random };

    Kind kind = Kind::constant;
    double value = 0.0;  // constant only; uniform_random draws in [h_min, h_max]

    bool operator==(const HPolicySpec&) const = default;
};

struct ScenarioConfig {
    int n = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<double> delta;  // defaults to 0.9 * max feasible
    std::vector<Eigen::Vector2d> desired;
    std::vector<Eigen::Vector2d> initial;
    std::vector<SignedDigraph> modes;
    ScheduleSpec schedule;
    AngleProfileSpec angles;
    HPolicySpec h_policy;
    long horizon = 2000;
    double threshold = 1e-3;  // relative stop on the pairwise error norm; 0 disables
    unsigned long long seed = 0;
    bool record_certificates = false;
    bool verify_lemmas = false;

    bool operator==(const ScenarioConfig& other) const;
};

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& c);

/// File I/O wrappers; parse errors carry the offending path and, for JSON
/// errors, the byte offset reported by the parser.
ScenarioConfig load_config(const std::string& path);
void save_config(const ScenarioConfig& c, const std::string& path);

/// Structural validation; returns one human-readable clause per problem
/// (empty means the config is runnable).
std::vector<std::string> validate_config(const ScenarioConfig& c);

/// The shipped four-agent example scenario: side-5 square formation, two
/// switching signed topologies with weights 0.2 / -0.08, h = 0.125.
ScenarioConfig paper_sec4_config();

}  // namespace formation
