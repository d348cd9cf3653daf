#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "formation/polytope.hpp"
#include "formation/signed_graph.hpp"

namespace formation {

struct AgentState {
    std::vector<Eigen::Vector2d> positions;  // world frame
    double time = 0.0;
    long step = 0;

    int agents() const noexcept { return static_cast<int>(positions.size()); }
};

struct FormationSpec {
    std::vector<Eigen::Vector2d> desired;  // fixed, world frame

    int agents() const noexcept { return static_cast<int>(desired.size()); }
};

/// Per-agent rotation angle as a function of time. Evaluations outside the
/// expected (-pi/2, pi/2] domain only warn (once per profile): none of the
/// geometric checks depend on the domain.
class RotationProfile {
  public:
    RotationProfile(int agents, std::function<double(int, double)> angle_fn);

    double angle(int agent, double t) const;  // agent is 0-based
    Eigen::VectorXd angles(double t) const;
    int agents() const noexcept { return agents_; }

  private:
    int agents_;
    std::function<double(int, double)> fn_;
    std::shared_ptr<std::atomic<bool>> warned_;
};

/// cos(theta) I + sin(theta) J with J = [[0,-1],[1,0]]; orthogonality and
/// unit determinant are asserted to 1e-12.
Eigen::Matrix2d rotation_matrix(double theta);

/// Block-diagonal stack of per-agent rotations.
Eigen::MatrixXd block_rotation(const Eigen::VectorXd& angles);

/// Local-frame measurement (R_i)^T (p_j - p_i - (d_j - d_i)).
Eigen::Vector2d sensed_displacement(const AgentState& state, const FormationSpec& spec,
                                    double theta_i, int i, int j);

/// Sum of coupling-weighted sensed displacements over the in-neighbors of i.
Eigen::Vector2d control_input(int i, const AgentState& state, const SignedDigraph& g,
                              const FormationSpec& spec, const RotationProfile& profile,
                              double t);

/// Forward-difference step p_i <- p_i + h u_i for every agent, synchronous
/// in the pre-step state.
AgentState step_agentwise(const AgentState& state, double h, const SignedDigraph& g,
                          const FormationSpec& spec, const RotationProfile& profile);

/// Stacked error-vector form: eps <- (I - h R^T Lambda) eps + h R^T S Lambda eps.
Eigen::VectorXd step_vectorized(const Eigen::VectorXd& eps, double h, const SignedDigraph& g,
                                const Eigen::VectorXd& angles);

/// (I_n - 1 1^T / n) (x) I2: the projector removing the common translation.
Eigen::MatrixXd projection_lambda(int n);

/// Columns are the lifted extremes in lexicographic (p, q, axis) order; its
/// transpose against a stacked error lists every scaled pairwise error.
Eigen::MatrixXd pairwise_difference_matrix(int n);

/// One-step contraction certificate: every column of
/// (I - h (L^T (x) I2) R) E decomposed over the lifted extremes, passing
/// when all weight sums stay within 1 - (1 - eta) h for eta = 1 - alpha + 2 beta.
struct Lemma6Certificate {
    long step = -1;
    Eigen::VectorXd column_weight_sums;
    double max_column_sum = 0.0;
    double bound = 0.0;
    double max_residual = 0.0;
    bool pass = false;

    nlohmann::json to_json() const;
};

/// Throws HypothesisViolation when the graph is not coupling-valid and
/// neighbor shared or h leaves (0, 1/(2n)], unless enforce_hypotheses is
/// false (diagnostic use: the certificate is still evaluated and reported).
Lemma6Certificate lemma6_certificate(const SignedDigraph& g, const Eigen::VectorXd& angles,
                                     double h, const CouplingBounds& b,
                                     bool enforce_hypotheses = true);

}  // namespace formation
