#include "doctest.h"

#include <random>

#include "formation/config.hpp"
#include "formation/linalg.hpp"
#include "formation/polytope.hpp"
#include "formation/random_graphs.hpp"
#include "formation/sim_engine.hpp"

using namespace formation;

namespace {

// Smaller sample counts than the acceptance defaults keep the unit suite
// quick; the acceptance binary runs the full configuration.
constexpr int kUnitSamples = 500;

GeneralStochasticMatrix paper_stochastic(int mode, const CouplingBounds& b) {
    return stochastic_from_graph(paper_sec4_config().modes[static_cast<size_t>(mode)], b);
}

Eigen::VectorXd random_angles(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.5707963, 1.5707963268);
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a(i) = u(rng);
    return a;
}

}  // namespace

TEST_CASE("lemma3 on the average matrix maps every generator to zero") {
    const int n = 4;
    CouplingBounds b(0.2, 0.08);
    GeneralStochasticMatrix avg(Eigen::MatrixXd::Constant(n, n, 1.0 / n));
    LemmaReport rep = check_lemma3(avg, b);
    CHECK(rep.passed);
    // All images vanish, so the worst slack is the full eta bound.
    CHECK(rep.worst_slack == doctest::Approx(0.96).epsilon(1e-9));
}

TEST_CASE("lemma3 on the shipped modes reports the measured contraction") {
    CouplingBounds b(0.2, 0.08);
    for (int mode : {0, 1}) {
        LemmaReport rep = check_lemma3(paper_stochastic(mode, b), b);
        CHECK(rep.passed);
        CHECK(rep.sample_count == 24);
        CHECK(rep.worst_slack == doctest::Approx(0.48).epsilon(1e-6));
    }
}

TEST_CASE("lemma3 rejects graphs that are not neighbor shared") {
    CouplingBounds b(0.25, 0.0);
    // Directed 3-cycle: coupling-valid, but no pair shares an in-neighbor.
    SignedDigraph cycle(3, {{1, 0, 0.3}, {2, 1, 0.3}, {0, 2, 0.3}});
    CHECK(validate_coupling(cycle, b).passed);
    GeneralStochasticMatrix s = stochastic_from_graph(cycle, b);
    CHECK_THROWS_AS(check_lemma3(s, b), HypothesisViolation);
}

TEST_CASE("lemma4 two-sided inclusion on the shipped modes") {
    CouplingBounds b(0.2, 0.08);
    for (int mode : {0, 1}) {
        LemmaReport rep = check_lemma4(paper_stochastic(mode, b), b, kUnitSamples);
        CHECK(rep.passed);
    }
}

TEST_CASE("lemma4 with the identity matrix keeps both sides equal") {
    CouplingBounds b(0.25, 0.0);
    // Complete positive graph at the identity limit is not expressible, so
    // use the closest admissible object: a neighbor-shared graph whose S is
    // strongly diagonal. The identity itself violates neighbor-sharedness
    // (no edges), so it must be rejected.
    GeneralStochasticMatrix eye(Eigen::MatrixXd::Identity(3, 3));
    CHECK_THROWS_AS(check_lemma4(eye, b), HypothesisViolation);
}

TEST_CASE("prop3 is the arithmetic h <= 1/(2n) test") {
    CHECK(check_prop3(0.125, 4));   // boundary
    CHECK_FALSE(check_prop3(0.2, 4));
    CHECK(check_prop3(0.25, 2));
    CHECK(l1_membership(0.25 * Eigen::VectorXd::Ones(4), 1.0));  // boundary point
    CHECK_THROWS_AS(check_prop3(0.0, 4), std::invalid_argument);
}

TEST_CASE("prop4 holds for arbitrary angle vectors") {
    SUBCASE("zero angles fix the section") {
        LemmaReport rep = check_prop4(Eigen::VectorXd::Zero(4), kUnitSamples);
        CHECK(rep.passed);
        CHECK(rep.worst_slack >= 0.5 - 1e-9);  // extreme entries are +-1/2
    }
    SUBCASE("shipped profile at t = 10") {
        Eigen::VectorXd angles(4);
        for (int i = 0; i < 4; ++i) angles(i) = paper_angle_profile(i + 1, 10.0);
        CHECK(check_prop4(angles, kUnitSamples).passed);
    }
    SUBCASE("randomized angle vectors") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 100; ++trial) {
            int n = 2 + static_cast<int>(rng() % 4);
            CHECK(check_prop4(random_angles(n, rng), 100).passed);
        }
    }
}

TEST_CASE("lemma5 contracts both mapped generator families") {
    CouplingBounds b(0.2, 0.08);

    SUBCASE("tiny h leaves almost the whole budget") {
        GeneralStochasticMatrix s = paper_stochastic(0, b);
        LemmaReport rep = check_lemma5(1e-9, s, Eigen::VectorXd::Zero(4), b);
        CHECK(rep.passed);
        CHECK(rep.worst_slack >= 1.0 - 1e-6);
    }
    SUBCASE("shipped modes at the profile's t = 10 angles") {
        Eigen::VectorXd angles(4);
        for (int i = 0; i < 4; ++i) angles(i) = paper_angle_profile(i + 1, 10.0);
        for (int mode : {0, 1})
            CHECK(check_lemma5(0.125, paper_stochastic(mode, b), angles, b).passed);
    }
    SUBCASE("h above the window is a hypothesis violation") {
        GeneralStochasticMatrix s = paper_stochastic(0, b);
        CHECK_THROWS_AS(check_lemma5(0.2, s, Eigen::VectorXd::Zero(4), b), HypothesisViolation);
    }
}

TEST_CASE("randomized lemma suite finds no violations") {
    std::mt19937_64 rng(303);
    const std::pair<double, double> cells[] = {{0.2, 0.08}, {0.3, 0.1}, {0.25, 0.05}};
    for (int trial = 0; trial < 60; ++trial) {
        auto [alpha, beta] = cells[trial % 3];
        CouplingBounds b(alpha, beta);
        int n = 3 + static_cast<int>(rng() % 3);
        SignedDigraph g = sample_admissible_graph(n, b, rng);
        GeneralStochasticMatrix s = stochastic_from_graph(g, b);
        Eigen::VectorXd angles = random_angles(n, rng);
        std::uniform_real_distribution<double> hu(1e-6, 1.0 / (2.0 * n));
        double h = hu(rng);

        LemmaReport l3 = check_lemma3(s, b);
        CHECK(l3.passed);
        CHECK(l3.worst_slack >= -1e-9);
        CHECK(check_lemma4(s, b, 100).passed);
        CHECK(check_prop4(angles, 100).passed);
        CHECK(check_lemma5(h, s, angles, b).passed);

        // The contraction chain, link by link: generator images vs the ergodic
        // coefficient vs the closed-form bound.
        double eta = ergodic_coefficient(s);
        Eigen::MatrixXd st2 = kron_with_identity2(s.entries().transpose());
        double worst_image = 0.0;
        for (const auto& e : lifted_extremes(n).points)
            worst_image = std::max(worst_image, (st2 * e).lpNorm<1>());
        CHECK(worst_image <= eta + 1e-9);
        CHECK(eta <= 1.0 - alpha + 2.0 * beta + 1e-9);
    }
}
