#include "formation/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "formation/random_graphs.hpp"
#include "formation/sim_engine.hpp"

namespace formation {

namespace {

std::vector<Eigen::Vector2d> points_from_json(const nlohmann::json& j, const char* field) {
    std::vector<Eigen::Vector2d> out;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 2)
            throw std::invalid_argument(std::string(field) + " entries must be [x, y]");
        out.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    return out;
}

nlohmann::json points_to_json(const std::vector<Eigen::Vector2d>& pts) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : pts) out.push_back({p.x(), p.y()});
    return out;
}

AngleProfileSpec angles_from_json(const nlohmann::json& j) {
    AngleProfileSpec spec;
    std::string type = j.at("type").get<std::string>();
    if (type == "paper_example") {
        spec.kind = AngleProfileSpec::Kind::paper_example;
    } else if (type == "constant") {
        spec.kind = AngleProfileSpec::Kind::constant;
        spec.values = j.at("values").get<std::vector<double>>();
    } else if (type == "piecewise") {
        spec.kind = AngleProfileSpec::Kind::piecewise;
        for (const auto& table : j.at("agents")) {
            std::vector<std::pair<double, double>> rows;
            for (const auto& row : table) {
                if (!row.is_array() || row.size() != 2)
                    throw std::invalid_argument("piecewise entries must be [time, angle]");
                rows.emplace_back(row[0].get<double>(), row[1].get<double>());
            }
            spec.tables.push_back(std::move(rows));
        }
    } else {
        throw std::invalid_argument("unknown angle profile type: " + type);
    }
    return spec;
}

nlohmann::json angles_to_json(const AngleProfileSpec& spec) {
    switch (spec.kind) {
        case AngleProfileSpec::Kind::paper_example:
            return {{"type", "paper_example"}};
        case AngleProfileSpec::Kind::constant:
            return {{"type", "constant"}, {"values", spec.values}};
        case AngleProfileSpec::Kind::piecewise: {
            nlohmann::json agents = nlohmann::json::array();
            for (const auto& table : spec.tables) {
                nlohmann::json rows = nlohmann::json::array();
                for (const auto& [t, v] : table) rows.push_back({t, v});
                agents.push_back(rows);
            }
            return {{"type", "piecewise"}, {"agents", agents}};
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

bool ScenarioConfig::operator==(const ScenarioConfig& other) const {
    auto same_points = [](const std::vector<Eigen::Vector2d>& a,
                          const std::vector<Eigen::Vector2d>& b) {
        if (a.size() != b.size()) return false;
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return false;
        return true;
    };
    return n == other.n && alpha == other.alpha && beta == other.beta && delta == other.delta &&
           same_points(desired, other.desired) && same_points(initial, other.initial) &&
           modes == other.modes && schedule == other.schedule && angles == other.angles &&
           h_policy == other.h_policy && horizon == other.horizon &&
           threshold == other.threshold && seed == other.seed &&
           record_certificates == other.record_certificates &&
           verify_lemmas == other.verify_lemmas;
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
    ScenarioConfig c;
    c.n = j.at("n").get<int>();
    c.alpha = j.at("alpha").get<double>();
    c.beta = j.at("beta").get<double>();
    if (j.contains("delta") && !j.at("delta").is_null()) c.delta = j.at("delta").get<double>();
    c.desired = points_from_json(j.at("desired"), "desired");
    c.initial = points_from_json(j.at("initial"), "initial");
    for (const auto& mode : j.at("modes")) c.modes.push_back(SignedDigraph::from_json(mode));
    const auto& sched = j.at("schedule");
    if (sched.at("type").get<std::string>() != "periodic")
        throw std::invalid_argument("schedule type must be \"periodic\"");
    c.schedule.dwell = sched.at("dwell").get<int>();
    c.schedule.pattern = sched.at("pattern").get<std::vector<int>>();
    c.angles = angles_from_json(j.at("angles"));
    const auto& hp = j.at("h_policy");
    std::string h_type = hp.at("type").get<std::string>();
    if (h_type == "constant") {
        c.h_policy.kind = HPolicySpec::Kind::constant;
        c.h_policy.value = hp.at("value").get<double>();
    } else if (h_type == "uniform_random") {
        c.h_policy.kind = HPolicySpec::Kind::uniform_random;
    } else {
        throw std::invalid_argument("unknown h policy type: " + h_type);
    }
    c.horizon = j.value("horizon", 2000L);
    c.threshold = j.value("threshold", 1e-3);
    c.seed = j.value("seed", 0ULL);
    c.record_certificates = j.value("record_certificates", false);
    c.verify_lemmas = j.value("verify_lemmas", false);
    return c;
}

nlohmann::json config_to_json(const ScenarioConfig& c) {
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& m : c.modes) modes.push_back(m.to_json());
    nlohmann::json j = {
        {"n", c.n},
        {"alpha", c.alpha},
        {"beta", c.beta},
        {"desired", points_to_json(c.desired)},
        {"initial", points_to_json(c.initial)},
        {"modes", modes},
        {"schedule",
         {{"type", "periodic"}, {"dwell", c.schedule.dwell}, {"pattern", c.schedule.pattern}}},
        {"angles", angles_to_json(c.angles)},
        {"horizon", c.horizon},
        {"threshold", c.threshold},
        {"seed", c.seed},
        {"record_certificates", c.record_certificates},
        {"verify_lemmas", c.verify_lemmas},
    };
    if (c.delta) j["delta"] = *c.delta;
    if (c.h_policy.kind == HPolicySpec::Kind::constant)
        j["h_policy"] = {{"type", "constant"}, {"value", c.h_policy.value}};
    else
        j["h_policy"] = {{"type", "uniform_random"}};
    return j;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::ios_base::failure(path + ": " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void save_config(const ScenarioConfig& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open for writing: " + path);
    out << config_to_json(c).dump(2) << "\n";
}

std::vector<std::string> validate_config(const ScenarioConfig& c) {
    std::vector<std::string> clauses;
    auto note = [&](const std::string& s) { clauses.push_back(s); };

    if (c.n < 2) note("n must be at least 2");
    if (!(c.alpha > 0.0) || !(c.alpha <= 0.5)) note("alpha must lie in (0, 1/2]");
    if (!(c.beta >= 0.0) || !(c.beta < c.alpha / 2.0)) note("beta must lie in [0, alpha/2)");
    if (static_cast<int>(c.desired.size()) != c.n) note("desired positions must list n agents");
    if (static_cast<int>(c.initial.size()) != c.n) note("initial positions must list n agents");
    for (const auto& pts : {std::cref(c.desired), std::cref(c.initial)})
        for (const auto& p : pts.get())
            if (!p.allFinite()) {
                note("positions must be finite");
                break;
            }
    if (c.modes.empty()) note("at least one topology mode is required");
    if (c.horizon < 1) note("horizon must be positive");
    if (c.threshold < 0.0) note("threshold must be nonnegative");

    if (!clauses.empty()) return clauses;  // later checks need the basics

    CouplingBounds bounds(c.alpha, c.beta);
    for (size_t m = 0; m < c.modes.size(); ++m) {
        const auto& g = c.modes[m];
        if (g.vertices() != c.n) {
            note("mode " + std::to_string(m + 1) + " has wrong vertex count");
            continue;
        }
        CouplingReport rep = validate_coupling(g, bounds);
        if (!rep.passed)
            note("mode " + std::to_string(m + 1) + " violates the coupling bounds (vertex " +
                 std::to_string(rep.violations[0].vertex) + ": " + rep.violations[0].clause + ")");
        if (!is_neighbor_shared(g))
            note("mode " + std::to_string(m + 1) + " is not neighbor shared");
    }

    if (c.schedule.dwell < 1) note("schedule dwell must be positive");
    if (c.schedule.pattern.empty()) note("schedule pattern must be nonempty");
    for (int id : c.schedule.pattern)
        if (id < 1 || id > static_cast<int>(c.modes.size()))
            note("schedule pattern references undefined mode " + std::to_string(id));

    switch (c.angles.kind) {
        case AngleProfileSpec::Kind::paper_example:
            if (c.n > 4) note("the paper_example angle profile covers at most 4 agents");
            break;
        case AngleProfileSpec::Kind::constant:
            if (static_cast<int>(c.angles.values.size()) != c.n)
                note("constant angle profile must list n angles");
            break;
        case AngleProfileSpec::Kind::piecewise:
            if (static_cast<int>(c.angles.tables.size()) != c.n)
                note("piecewise angle profile must list n agent tables");
            for (const auto& table : c.angles.tables) {
                if (table.empty() || table.front().first != 0.0)
                    note("piecewise tables must start at time 0");
                for (size_t i = 1; i < table.size(); ++i)
                    if (table[i].first <= table[i - 1].first)
                        note("piecewise breakpoints must be strictly increasing");
            }
            break;
    }

    ParameterCertificate params =
        solve_parameters(c.n, bounds, c.delta.value_or(default_delta(c.n, bounds)));
    if (!params.feasible)
        note("delta " + std::to_string(params.delta) + " is infeasible; maximum is " +
             std::to_string(params.max_feasible_delta));
    if (c.h_policy.kind == HPolicySpec::Kind::constant && params.feasible &&
        (c.h_policy.value < params.h_min - kCertTol || c.h_policy.value > params.h_max + kCertTol))
        note("constant h " + std::to_string(c.h_policy.value) + " outside [h_min, h_max] = [" +
             std::to_string(params.h_min) + ", " + std::to_string(params.h_max) + "]");

    return clauses;
}

ScenarioConfig paper_sec4_config() {
    ScenarioConfig c;
    c.n = 4;
    c.alpha = 0.2;
    c.beta = 0.08;
    c.desired = {{0.0, 0.0}, {5.0, 0.0}, {5.0, 5.0}, {0.0, 5.0}};
    c.initial = {{-6.0, 2.0}, {9.0, -10.0}, {3.0, 0.0}, {0.0, 16.0}};

    // Mode 1: positive weight 0.2 on every ordered pair except that agent 1
    // senses agent 2 with the negative weight -0.08.
    auto build_mode = [](int neg_target, int neg_source) {
        std::vector<GraphEdge> edges;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (i == j) continue;
                if (i == neg_target && j == neg_source)
                    edges.push_back({j, i, -0.08});
                else
                    edges.push_back({j, i, 0.2});
            }
        return SignedDigraph(4, std::move(edges));
    };
    c.modes = {build_mode(0, 1), build_mode(2, 3)};
    c.schedule = {5, {1, 2}};
    c.angles.kind = AngleProfileSpec::Kind::paper_example;
    c.h_policy = {HPolicySpec::Kind::constant, 0.125};
    c.horizon = 2000;
    c.threshold = 0.0;  // run the full horizon; the trajectory is the artifact
    c.seed = 1;
    c.record_certificates = false;
    c.verify_lemmas = false;
    return c;
}

}  // namespace formation
