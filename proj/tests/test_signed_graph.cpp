#include "doctest.h"

#include <random>

#include "formation/config.hpp"
#include "formation/random_graphs.hpp"
#include "formation/signed_graph.hpp"

using namespace formation;

namespace {

SignedDigraph paper_mode(int which) {
    return paper_sec4_config().modes[static_cast<size_t>(which)];
}

}  // namespace

TEST_CASE("graph construction rejects malformed edge lists") {
    CHECK_THROWS_AS(SignedDigraph(3, {{0, 0, 0.5}}), std::invalid_argument);   // self-loop
    CHECK_THROWS_AS(SignedDigraph(3, {{0, 1, 0.0}}), std::invalid_argument);   // zero weight
    CHECK_THROWS_AS(SignedDigraph(3, {{0, 3, 0.5}}), std::invalid_argument);   // out of range
    CHECK_THROWS_AS(SignedDigraph(3, {{0, 1, 0.5}, {0, 1, 0.2}}), std::invalid_argument);
}

TEST_CASE("adjacency matrix places a^{ij} at (target, source)") {
    CHECK(adjacency_matrix(SignedDigraph(3, {})).isZero(0.0));

    SignedDigraph g(3, {{1, 0, 0.2}, {2, 0, -0.08}});
    Eigen::MatrixXd a = adjacency_matrix(g);
    CHECK(a(0, 1) == 0.2);
    CHECK(a(0, 2) == -0.08);
    CHECK(a.diagonal().isZero(0.0));
    CHECK(a.cwiseAbs().sum() == doctest::Approx(0.28));
}

TEST_CASE("paper example adjacency carries 0.2 and -0.08 entries only") {
    for (int m : {0, 1}) {
        Eigen::MatrixXd a = adjacency_matrix(paper_mode(m));
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                if (i == j) CHECK(a(i, j) == 0.0);
                else CHECK((a(i, j) == 0.2 || a(i, j) == -0.08));
            }
    }
}

TEST_CASE("laplacian diagonal balances each row to zero") {
    CHECK(laplacian(SignedDigraph(2, {})).isZero(0.0));

    SignedDigraph g(3, {{1, 0, 0.2}, {2, 0, -0.08}});
    Eigen::MatrixXd l = laplacian(g);
    CHECK(l(0, 0) == doctest::Approx(0.12).epsilon(1e-12));
    CHECK(l(0, 1) == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(l(0, 2) == doctest::Approx(0.08).epsilon(1e-12));
}

TEST_CASE("laplacian rows sum to zero for random graphs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 + static_cast<int>(rng() % 6);
        std::vector<GraphEdge> edges;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j || rng() % 2) continue;
                double w = u(rng);
                if (w != 0.0) edges.push_back({j, i, w});
            }
        SignedDigraph g(n, std::move(edges));
        Eigen::VectorXd row_sums = laplacian(g) * Eigen::VectorXd::Ones(n);
        CHECK(row_sums.lpNorm<Eigen::Infinity>() <= 1e-12);
    }
}

TEST_CASE("stochastic_from_graph") {
    CouplingBounds b(0.2, 0.08);

    SUBCASE("empty graph gives the identity") {
        GeneralStochasticMatrix s = stochastic_from_graph(SignedDigraph(3, {}), b);
        CHECK(s.entries().isIdentity(0.0));
    }
    SUBCASE("paper modes are row-stochastic and inside S_beta") {
        for (int m : {0, 1}) {
            GeneralStochasticMatrix s = stochastic_from_graph(paper_mode(m), b);
            Eigen::VectorXd sums = s.entries().rowwise().sum();
            CHECK((sums - Eigen::VectorXd::Ones(4)).lpNorm<Eigen::Infinity>() <= 1e-12);
            CHECK(s.max_row_negative_mass() <= 0.08 + 1e-12);
        }
    }
    SUBCASE("a row of negative mass 0.15 violates beta = 0.08") {
        SignedDigraph g(3, {{1, 0, -0.07}, {2, 0, -0.08}});
        CHECK_THROWS_AS(stochastic_from_graph(g, b), CouplingViolation);
    }
}

TEST_CASE("coupling bounds constructor enforces the admissible ranges") {
    CHECK_NOTHROW(CouplingBounds(0.5, 0.0));
    CHECK_NOTHROW(CouplingBounds(0.2, 0.08));
    CHECK_THROWS_AS(CouplingBounds(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CouplingBounds(0.6, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CouplingBounds(0.2, 0.1), std::invalid_argument);   // beta == alpha/2
    CHECK_THROWS_AS(CouplingBounds(0.2, 0.15), std::invalid_argument);  // beta > alpha/2
}

TEST_CASE("validate_coupling clauses") {
    CouplingBounds b(0.2, 0.08);

    SUBCASE("two positive in-weights of 0.2 pass") {
        SignedDigraph g(3, {{1, 0, 0.2}, {2, 0, 0.2}});
        CHECK(validate_coupling(g, b).passed);
    }
    SUBCASE("a positive weight below alpha fails") {
        SignedDigraph g(3, {{1, 0, 0.1}, {2, 0, 0.3}});
        CouplingReport rep = validate_coupling(g, b);
        CHECK_FALSE(rep.passed);
        REQUIRE_FALSE(rep.violations.empty());
        CHECK(rep.violations[0].vertex == 1);
    }
    SUBCASE("a positive sum above 1-alpha fails") {
        SignedDigraph g(3, {{1, 0, 0.45}, {2, 0, 0.45}});
        CHECK_FALSE(validate_coupling(g, b).passed);
    }
    SUBCASE("negative in-weight -0.08 passes at the boundary") {
        SignedDigraph g(3, {{1, 0, 0.2}, {2, 0, -0.08}});
        CHECK(validate_coupling(g, b).passed);
    }
    SUBCASE("negative sum below -beta fails") {
        SignedDigraph g(3, {{1, 0, -0.05}, {2, 0, -0.05}});
        CHECK_FALSE(validate_coupling(g, b).passed);
    }
    SUBCASE("report serializes violations with vertex indices") {
        SignedDigraph g(3, {{1, 0, 0.1}});
        auto j = validate_coupling(g, b).to_json();
        CHECK(j["passed"] == false);
        CHECK(j["violations"][0]["vertex"] == 1);
    }
}

TEST_CASE("neighbor-shared detection") {
    SUBCASE("complete positive digraph on 3 vertices") {
        std::vector<GraphEdge> edges;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) edges.push_back({j, i, 0.3});
        CHECK(is_neighbor_shared(SignedDigraph(3, edges)));
    }
    SUBCASE("directed positive 3-cycle is not neighbor shared") {
        SignedDigraph g(3, {{1, 0, 0.3}, {2, 1, 0.3}, {0, 2, 0.3}});
        CHECK_FALSE(is_neighbor_shared(g));
    }
    SUBCASE("both shipped switching modes are neighbor shared") {
        CHECK(is_neighbor_shared(paper_mode(0)));
        CHECK(is_neighbor_shared(paper_mode(1)));
    }
}

TEST_CASE("ergodic coefficient and shared weight margin") {
    const int n = 4;
    GeneralStochasticMatrix avg(Eigen::MatrixXd::Constant(n, n, 1.0 / n));
    CHECK(ergodic_coefficient(avg) == 0.0);
    CHECK(shared_weight_margin(avg) == doctest::Approx(1.0).epsilon(1e-12));

    GeneralStochasticMatrix eye(Eigen::MatrixXd::Identity(2, 2));
    CHECK(ergodic_coefficient(eye) == 1.0);
    CHECK(shared_weight_margin(eye) == 0.0);

    CouplingBounds b(0.2, 0.08);
    GeneralStochasticMatrix s = stochastic_from_graph(paper_mode(0), b);
    CHECK(ergodic_coefficient(s) == doctest::Approx(0.48).epsilon(1e-12));
    CHECK(shared_weight_margin(s) == doctest::Approx(0.52).epsilon(1e-12));
    CHECK(shared_weight_margin(s) >= 0.2 - 2 * 0.08);
}

TEST_CASE("corrupted stochastic matrix is rejected at construction") {
    Eigen::MatrixXd bad(2, 2);
    bad << 0.6, 0.5, 0.5, 0.5;  // first row sums to 1.1
    CHECK_THROWS_AS(GeneralStochasticMatrix{bad}, std::invalid_argument);
}

TEST_CASE("randomized admissible graphs satisfy the contraction chain") {
    std::mt19937_64 rng(2024);
    for (auto [alpha, beta] : {std::pair{0.2, 0.08}, std::pair{0.3, 0.1}}) {
        CouplingBounds b(alpha, beta);
        for (int trial = 0; trial < 200; ++trial) {
            int n = 3 + static_cast<int>(rng() % 3);
            SignedDigraph g = sample_admissible_graph(n, b, rng);
            REQUIRE(validate_coupling(g, b).passed);
            REQUIRE(is_neighbor_shared(g));

            GeneralStochasticMatrix s = stochastic_from_graph(g, b);
            double eta = ergodic_coefficient(s);
            double margin = shared_weight_margin(s);
            CHECK(eta <= 1.0 - alpha + 2.0 * beta + 1e-9);
            CHECK(margin >= alpha - 2.0 * beta - 1e-9);
            // The chain 1 - margin >= eta holds with equality for stochastic rows.
            CHECK(1.0 - margin >= eta - 1e-9);
            CHECK(1.0 - margin == doctest::Approx(eta).epsilon(1e-9));
            // Diagonal dominance consequence of the coupling bounds.
            CHECK(s.entries().diagonal().minCoeff() >= alpha - 1e-9);
        }
    }
}

TEST_CASE("ergodic coefficient is invariant under simultaneous permutation") {
    std::mt19937_64 rng(5);
    CouplingBounds b(0.2, 0.08);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 3 + static_cast<int>(rng() % 3);
        GeneralStochasticMatrix s = stochastic_from_graph(sample_admissible_graph(n, b, rng), b);
        std::vector<int> perm(static_cast<size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) p(i, perm[static_cast<size_t>(i)]) = 1.0;
        GeneralStochasticMatrix permuted(p * s.entries() * p.transpose());
        CHECK(ergodic_coefficient(permuted) == doctest::Approx(ergodic_coefficient(s)).epsilon(1e-12));
    }
}

TEST_CASE("graph JSON round-trip uses 1-based indices") {
    SignedDigraph g(3, {{1, 0, 0.2}, {2, 0, -0.08}});
    nlohmann::json j = g.to_json();
    CHECK(j["n"] == 3);
    CHECK(j["edges"][0][0] == 2);  // source, 1-based
    CHECK(j["edges"][0][1] == 1);
    CHECK(SignedDigraph::from_json(j) == g);
}

TEST_CASE("graph_from_stochastic inverts stochastic_from_graph") {
    std::mt19937_64 rng(17);
    CouplingBounds b(0.2, 0.08);
    for (int trial = 0; trial < 30; ++trial) {
        SignedDigraph g = sample_admissible_graph(4, b, rng);
        SignedDigraph back = graph_from_stochastic(stochastic_from_graph(g, b));
        CHECK((adjacency_matrix(back) - adjacency_matrix(g)).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
}

TEST_CASE("sampler refuses infeasible cells with an explanation") {
    std::mt19937_64 rng(1);
    CHECK(admissible_graphs_exist(4, CouplingBounds(0.2, 0.08)));
    CHECK_FALSE(admissible_graphs_exist(4, CouplingBounds(0.5, 0.0)));
    CHECK_FALSE(admissible_graphs_exist(2, CouplingBounds(0.2, 0.08)));
    CHECK_THROWS_AS(sample_admissible_graph(4, CouplingBounds(0.5, 0.0), rng),
                    InfeasibleConstraintSet);
}
