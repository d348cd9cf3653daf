#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "formation/errors.hpp"
#include "formation/tolerances.hpp"

namespace formation {

/// Directed edge of a signed interaction graph. `weight` is the coupling
/// coefficient a^{ij} sensed by `target` about `source`: the edge (j, i)
/// corresponds to entry (i, j) of the adjacency matrix. Indices are 0-based
/// in memory; the JSON wire format is 1-based.
struct GraphEdge {
    int source = 0;
    int target = 0;
    double weight = 0.0;

    bool operator==(const GraphEdge&) const = default;
};

class SignedDigraph {
  public:
    /// Validates: indices in range, no self-loops, at most one edge per
    /// ordered pair, all weights nonzero. Throws std::invalid_argument.
    SignedDigraph(int n_vertices, std::vector<GraphEdge> edges);

    int vertices() const noexcept { return n_; }
    const std::vector<GraphEdge>& edges() const noexcept { return edges_; }

    /// Wire format: {"n": N, "edges": [[source, target, weight], ...]},
    /// vertex indices 1-based.
    static SignedDigraph from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    bool operator==(const SignedDigraph&) const = default;

  private:
    int n_;
    std::vector<GraphEdge> edges_;
};

/// The admissible range of coupling coefficients: alpha in (0, 1/2],
/// beta in [0, alpha/2). Throws std::invalid_argument outside that range.
struct CouplingBounds {
    double alpha;
    double beta;

    CouplingBounds(double alpha, double beta);

    bool operator==(const CouplingBounds&) const = default;
};

/// Row-stochastic matrix whose entries may be negative. Construction checks
/// the row sums (tolerance kCertTol); membership in S_beta is a separate
/// query because beta belongs to the scenario, not the matrix.
class GeneralStochasticMatrix {
  public:
    explicit GeneralStochasticMatrix(Eigen::MatrixXd entries);

    const Eigen::MatrixXd& entries() const noexcept { return s_; }
    int size() const noexcept { return static_cast<int>(s_.rows()); }

    /// max over rows of -sum_j min{s_ij, 0}; S is in S_beta iff this <= beta.
    double max_row_negative_mass() const;
    bool in_s_beta(double beta, double tol = kCertTol) const;

  private:
    Eigen::MatrixXd s_;
};

/// Entry (i, j) = a^{ij} iff the edge (j, i) exists; zero diagonal.
Eigen::MatrixXd adjacency_matrix(const SignedDigraph& g);

/// Off-diagonal -a^{ij}; diagonal sum_j a^{ij}, so every row sums to zero.
Eigen::MatrixXd laplacian(const SignedDigraph& g);

/// S = I - L. Throws CouplingViolation when S leaves S_beta.
GeneralStochasticMatrix stochastic_from_graph(const SignedDigraph& g, const CouplingBounds& b);

struct CouplingReport {
    struct Violation {
        int vertex;  // 1-based, matching the wire format
        std::string clause;
    };
    bool passed = true;
    std::vector<Violation> violations;

    nlohmann::json to_json() const;
};

/// Per-vertex checks: each positive weight in [alpha, 1), positive in-weights
/// summing to [alpha, 1-alpha], negative in-weights (when present) summing to
/// [-beta, 0). Sum clauses apply only to vertices that have weights of that
/// sign.
CouplingReport validate_coupling(const SignedDigraph& g, const CouplingBounds& b);

/// True iff every ordered pair of distinct vertices p, q has a witness
/// i not in {p, q} with positive edges (i, p) and (i, q).
bool is_neighbor_shared(const SignedDigraph& g);

/// max over row pairs of half the l1 distance between the rows.
double ergodic_coefficient(const GeneralStochasticMatrix& s);

/// min over row pairs p != q of sum_i min{s_pi, s_qi}.
double shared_weight_margin(const GeneralStochasticMatrix& s);

/// Recover the graph whose I - laplacian equals s (off-diagonal entries
/// above `tol` in magnitude become edges).
SignedDigraph graph_from_stochastic(const GeneralStochasticMatrix& s, double tol = kMatrixTol);

}  // namespace formation
