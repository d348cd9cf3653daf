#include "formation/dynamics.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "formation/linalg.hpp"

namespace formation {

RotationProfile::RotationProfile(int agents, std::function<double(int, double)> angle_fn)
    : agents_(agents), fn_(std::move(angle_fn)),
      warned_(std::make_shared<std::atomic<bool>>(false)) {
    if (agents_ < 1) throw std::invalid_argument("RotationProfile: need at least one agent");
    if (!fn_) throw std::invalid_argument("RotationProfile: empty angle function");
}

double RotationProfile::angle(int agent, double t) const {
    if (agent < 0 || agent >= agents_)
        throw IndexOutOfRange("RotationProfile: agent index out of range");
    double theta = fn_(agent, t);
    constexpr double half_pi = 1.5707963267948966;
    if ((theta <= -half_pi || theta > half_pi) && !warned_->exchange(true)) {
        std::cerr << "warning: rotation angle " << theta << " for agent " << agent + 1
                  << " leaves (-pi/2, pi/2]\n";
    }
    return theta;
}

Eigen::VectorXd RotationProfile::angles(double t) const {
    Eigen::VectorXd out(agents_);
    for (int i = 0; i < agents_; ++i) out(i) = angle(i, t);
    return out;
}

Eigen::Matrix2d rotation_matrix(double theta) {
    Eigen::Matrix2d r = rotation2(theta);
    if ((r.transpose() * r - Eigen::Matrix2d::Identity()).lpNorm<Eigen::Infinity>() > kMatrixTol ||
        std::abs(r.determinant() - 1.0) > kMatrixTol)
        throw std::logic_error("rotation_matrix: result is not special orthogonal");
    return r;
}

Eigen::MatrixXd block_rotation(const Eigen::VectorXd& angles) {
    const auto n = angles.size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) out.block<2, 2>(2 * i, 2 * i) = rotation_matrix(angles(i));
    return out;
}

Eigen::Vector2d sensed_displacement(const AgentState& state, const FormationSpec& spec,
                                    double theta_i, int i, int j) {
    if (i == j) throw std::invalid_argument("sensed_displacement: i and j must differ");
    Eigen::Vector2d relative = state.positions[j] - state.positions[i] -
                               (spec.desired[j] - spec.desired[i]);
    return rotation2(theta_i).transpose() * relative;
}

Eigen::Vector2d control_input(int i, const AgentState& state, const SignedDigraph& g,
                              const FormationSpec& spec, const RotationProfile& profile,
                              double t) {
    double theta_i = profile.angle(i, t);
    Eigen::Vector2d u = Eigen::Vector2d::Zero();
    for (const auto& e : g.edges()) {
        if (e.target != i) continue;
        u += e.weight * sensed_displacement(state, spec, theta_i, i, e.source);
    }
    return u;
}

AgentState step_agentwise(const AgentState& state, double h, const SignedDigraph& g,
                          const FormationSpec& spec, const RotationProfile& profile) {
    if (h < 0.0) throw std::invalid_argument("step_agentwise: h must be nonnegative");
    const int n = state.agents();
    std::vector<Eigen::Vector2d> inputs(n);
    for (int i = 0; i < n; ++i) inputs[i] = control_input(i, state, g, spec, profile, state.time);

    AgentState next = state;
    for (int i = 0; i < n; ++i) next.positions[i] += h * inputs[i];
    next.time += h;
    next.step += 1;
    return next;
}

Eigen::VectorXd step_vectorized(const Eigen::VectorXd& eps, double h, const SignedDigraph& g,
                                const Eigen::VectorXd& angles) {
    const int n = g.vertices();
    if (eps.size() != 2 * n || angles.size() != n)
        throw std::invalid_argument("step_vectorized: dimension mismatch");
    Eigen::MatrixXd rot_t = block_rotation(angles).transpose();
    Eigen::MatrixXd lambda = projection_lambda(n);
    Eigen::MatrixXd s2 =
        kron_with_identity2(Eigen::MatrixXd::Identity(n, n) - laplacian(g));
    return (Eigen::MatrixXd::Identity(2 * n, 2 * n) - h * rot_t * lambda) * eps +
           h * rot_t * s2 * lambda * eps;
}

Eigen::MatrixXd projection_lambda(int n) {
    if (n < 1) throw std::invalid_argument("projection_lambda: n must be positive");
    return kron_with_identity2(Eigen::MatrixXd::Identity(n, n) -
                               Eigen::MatrixXd::Constant(n, n, 1.0 / n));
}

Eigen::MatrixXd pairwise_difference_matrix(int n) {
    return lifted_extremes(n).as_matrix();
}

nlohmann::json Lemma6Certificate::to_json() const {
    nlohmann::json sums = nlohmann::json::array();
    for (Eigen::Index i = 0; i < column_weight_sums.size(); ++i)
        sums.push_back(column_weight_sums(i));
    return {{"step", step},
            {"column_weight_sums", sums},
            {"max_column_sum", max_column_sum},
            {"bound", bound},
            {"max_residual", max_residual},
            {"pass", pass}};
}

Lemma6Certificate lemma6_certificate(const SignedDigraph& g, const Eigen::VectorXd& angles,
                                     double h, const CouplingBounds& b,
                                     bool enforce_hypotheses) {
    const int n = g.vertices();
    if (angles.size() != n)
        throw std::invalid_argument("lemma6_certificate: angle count differs from n");
    if (enforce_hypotheses) {
        CouplingReport coupling = validate_coupling(g, b);
        if (!coupling.passed) {
            std::ostringstream msg;
            msg << "lemma6: coupling bounds violated (vertex " << coupling.violations[0].vertex
                << ": " << coupling.violations[0].clause << ")";
            throw HypothesisViolation(msg.str());
        }
        if (!is_neighbor_shared(g))
            throw HypothesisViolation("lemma6: graph is not neighbor shared");
        if (h <= 0.0 || h > 1.0 / (2.0 * n) + kCertTol)
            throw HypothesisViolation("lemma6: h outside (0, 1/(2n)]");
    }

    const double eta = 1.0 - (b.alpha - 2.0 * b.beta);
    ExtremeSet gens = lifted_extremes(n);
    Eigen::MatrixXd e_mat = gens.as_matrix();
    Eigen::MatrixXd map =
        Eigen::MatrixXd::Identity(2 * n, 2 * n) -
        h * kron_with_identity2(laplacian(g).transpose()) * block_rotation(angles);
    Eigen::MatrixXd images = map * e_mat;

    Lemma6Certificate cert;
    cert.bound = 1.0 - (1.0 - eta) * h;
    cert.column_weight_sums.resize(images.cols());
    for (Eigen::Index c = 0; c < images.cols(); ++c) {
        MembershipCertificate mc = min_weight_decomposition(images.col(c), gens);
        cert.column_weight_sums(c) = mc.weight_sum;
        cert.max_residual = std::max(cert.max_residual, mc.residual);
    }
    cert.max_column_sum = cert.column_weight_sums.maxCoeff();
    cert.pass = cert.max_column_sum <= cert.bound + kCertTol && cert.max_residual <= kLpResidualTol;
    return cert;
}

}  // namespace formation
