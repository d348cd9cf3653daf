#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <random>

#include "formation/config.hpp"
#include "formation/random_graphs.hpp"
#include "formation/sim_engine.hpp"

using namespace formation;

namespace {

ScenarioConfig random_config(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    ScenarioConfig c;
    c.n = 3 + static_cast<int>(rng() % 3);
    c.alpha = 0.2;
    c.beta = 0.08;
    if (rng() % 2) c.delta = 0.0001 + 0.0001 * static_cast<double>(rng() % 9);
    CouplingBounds b(c.alpha, c.beta);
    for (int i = 0; i < c.n; ++i) {
        c.desired.emplace_back(u(rng), u(rng));
        c.initial.emplace_back(u(rng), u(rng));
    }
    int n_modes = 1 + static_cast<int>(rng() % 3);
    for (int m = 0; m < n_modes; ++m) c.modes.push_back(sample_admissible_graph(c.n, b, rng));
    c.schedule.dwell = 1 + static_cast<int>(rng() % 7);
    for (int m = 0; m < n_modes; ++m) c.schedule.pattern.push_back(m + 1);
    switch (rng() % 3) {
        case 0:
            c.angles.kind = AngleProfileSpec::Kind::constant;
            for (int i = 0; i < c.n; ++i) c.angles.values.push_back(u(rng) / 10.0);
            break;
        case 1: {
            c.angles.kind = AngleProfileSpec::Kind::piecewise;
            for (int i = 0; i < c.n; ++i) {
                std::vector<std::pair<double, double>> table{{0.0, u(rng) / 10.0}};
                if (rng() % 2) table.emplace_back(1.0 + std::abs(u(rng)), u(rng) / 10.0);
                c.angles.tables.push_back(std::move(table));
            }
            break;
        }
        default:
            c.angles.kind = AngleProfileSpec::Kind::constant;
            c.angles.values.assign(static_cast<size_t>(c.n), 0.0);
    }
    if (rng() % 2) {
        c.h_policy.kind = HPolicySpec::Kind::uniform_random;
    } else {
        c.h_policy.kind = HPolicySpec::Kind::constant;
        c.h_policy.value = 1.0 / (2.0 * c.n);
    }
    c.horizon = 10 + static_cast<long>(rng() % 1000);
    c.threshold = (rng() % 2) ? 0.0 : 1e-3;
    c.seed = rng();
    c.record_certificates = rng() % 2;
    c.verify_lemmas = false;
    return c;
}

}  // namespace

TEST_CASE("shipped scenario validates cleanly") {
    CHECK(validate_config(paper_sec4_config()).empty());
}

TEST_CASE("config JSON round-trip is exact") {
    ScenarioConfig paper = paper_sec4_config();
    CHECK(config_from_json(config_to_json(paper)) == paper);

    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        ScenarioConfig c = random_config(rng);
        ScenarioConfig back = config_from_json(config_to_json(c));
        CHECK(back == c);
    }
}

TEST_CASE("config file round-trip through disk") {
    const std::string path = "roundtrip_config_test.json";
    ScenarioConfig paper = paper_sec4_config();
    save_config(paper, path);
    CHECK(load_config(path) == paper);
    std::remove(path.c_str());
}

TEST_CASE("validation collects one clause per defect") {
    ScenarioConfig c = paper_sec4_config();

    SUBCASE("coupling bounds") {
        c.beta = 0.15;
        auto clauses = validate_config(c);
        REQUIRE_FALSE(clauses.empty());
        CHECK(clauses[0].find("beta") != std::string::npos);
    }
    SUBCASE("desired count mismatch") {
        c.desired.pop_back();
        CHECK_FALSE(validate_config(c).empty());
    }
    SUBCASE("undefined mode in the pattern") {
        c.schedule.pattern = {1, 7};
        CHECK_FALSE(validate_config(c).empty());
    }
    SUBCASE("piecewise profile must start at zero") {
        c.angles.kind = AngleProfileSpec::Kind::piecewise;
        c.angles.tables.assign(4, {{0.5, 0.1}});
        CHECK_FALSE(validate_config(c).empty());
    }
    SUBCASE("paper profile caps the agent count") {
        c.n = 5;
        c.desired.emplace_back(1.0, 1.0);
        c.initial.emplace_back(0.0, 0.0);
        auto clauses = validate_config(c);
        bool found = false;
        for (const auto& clause : clauses)
            found = found || clause.find("paper_example") != std::string::npos;
        CHECK(found);
    }
    SUBCASE("non-neighbor-shared mode") {
        c.modes.push_back(SignedDigraph(4, {{1, 0, 0.3}, {2, 1, 0.3}, {3, 2, 0.3}, {0, 3, 0.3}}));
        c.schedule.pattern = {1, 2, 3};
        auto clauses = validate_config(c);
        bool found = false;
        for (const auto& clause : clauses)
            found = found || clause.find("neighbor shared") != std::string::npos;
        CHECK(found);
    }
}

TEST_CASE("load_config reports I/O and parse context") {
    CHECK_THROWS_AS(load_config("does_not_exist.json"), std::ios_base::failure);

    const std::string path = "broken_config_test.json";
    {
        std::ofstream out(path);
        out << "{ broken";
    }
    CHECK_THROWS_AS(load_config(path), std::ios_base::failure);
    std::remove(path.c_str());
}
