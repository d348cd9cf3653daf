#include "formation/signed_graph.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace formation {

SignedDigraph::SignedDigraph(int n_vertices, std::vector<GraphEdge> edges)
    : n_(n_vertices), edges_(std::move(edges)) {
    if (n_ < 1) throw std::invalid_argument("graph needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges_) {
        if (e.source < 0 || e.source >= n_ || e.target < 0 || e.target >= n_)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.source == e.target)
            throw std::invalid_argument("self-loops are not allowed");
        if (e.weight == 0.0)
            throw std::invalid_argument("edge weights must be nonzero");
        if (!seen.insert({e.source, e.target}).second)
            throw std::invalid_argument("duplicate edge for ordered pair");
    }
}

SignedDigraph SignedDigraph::from_json(const nlohmann::json& j) {
    int n = j.at("n").get<int>();
    std::vector<GraphEdge> edges;
    for (const auto& row : j.at("edges")) {
        if (!row.is_array() || row.size() != 3)
            throw std::invalid_argument("edges entries must be [source, target, weight]");
        edges.push_back({row[0].get<int>() - 1, row[1].get<int>() - 1, row[2].get<double>()});
    }
    return SignedDigraph(n, std::move(edges));
}

nlohmann::json SignedDigraph::to_json() const {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : edges_)
        edges.push_back({e.source + 1, e.target + 1, e.weight});
    return {{"n", n_}, {"edges", edges}};
}

CouplingBounds::CouplingBounds(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!(alpha > 0.0) || !(alpha <= 0.5))
        throw std::invalid_argument("alpha must lie in (0, 1/2]");
    if (!(beta >= 0.0) || !(beta < alpha / 2.0))
        throw std::invalid_argument("beta must lie in [0, alpha/2)");
}

GeneralStochasticMatrix::GeneralStochasticMatrix(Eigen::MatrixXd entries) : s_(std::move(entries)) {
    if (s_.rows() != s_.cols() || s_.rows() < 1)
        throw std::invalid_argument("stochastic matrix must be square and nonempty");
    for (Eigen::Index i = 0; i < s_.rows(); ++i) {
        double sum = s_.row(i).sum();
        if (std::abs(sum - 1.0) > kCertTol) {
            std::ostringstream msg;
            msg << "row " << i + 1 << " sums to " << sum << ", expected 1";
            throw std::invalid_argument(msg.str());
        }
    }
}

double GeneralStochasticMatrix::max_row_negative_mass() const {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < s_.rows(); ++i)
        worst = std::max(worst, -s_.row(i).cwiseMin(0.0).sum());
    return worst;
}

bool GeneralStochasticMatrix::in_s_beta(double beta, double tol) const {
    return max_row_negative_mass() <= beta + tol;
}

Eigen::MatrixXd adjacency_matrix(const SignedDigraph& g) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.vertices(), g.vertices());
    for (const auto& e : g.edges()) a(e.target, e.source) = e.weight;
    return a;
}

Eigen::MatrixXd laplacian(const SignedDigraph& g) {
    Eigen::MatrixXd a = adjacency_matrix(g);
    Eigen::MatrixXd l = -a;
    for (Eigen::Index i = 0; i < a.rows(); ++i) l(i, i) = a.row(i).sum();
    return l;
}

GeneralStochasticMatrix stochastic_from_graph(const SignedDigraph& g, const CouplingBounds& b) {
    Eigen::MatrixXd s =
        Eigen::MatrixXd::Identity(g.vertices(), g.vertices()) - laplacian(g);
    GeneralStochasticMatrix m(std::move(s));
    if (!m.in_s_beta(b.beta)) {
        std::ostringstream msg;
        msg << "S = I - L has row negative mass " << m.max_row_negative_mass()
            << " exceeding beta = " << b.beta;
        throw CouplingViolation(msg.str());
    }
    return m;
}

CouplingReport validate_coupling(const SignedDigraph& g, const CouplingBounds& b) {
    CouplingReport report;
    const int n = g.vertices();
    std::vector<double> pos_sum(n, 0.0), neg_sum(n, 0.0);
    std::vector<bool> has_pos(n, false), has_neg(n, false);

    auto flag = [&](int vertex, std::string clause) {
        report.passed = false;
        report.violations.push_back({vertex + 1, std::move(clause)});
    };

    for (const auto& e : g.edges()) {
        if (e.weight > 0.0) {
            has_pos[e.target] = true;
            pos_sum[e.target] += e.weight;
            if (e.weight < b.alpha - kCertTol || e.weight >= 1.0 + kCertTol) {
                std::ostringstream msg;
                msg << "positive weight " << e.weight << " outside [alpha, 1) = ["
                    << b.alpha << ", 1)";
                flag(e.target, msg.str());
            }
        } else {
            has_neg[e.target] = true;
            neg_sum[e.target] += e.weight;
        }
    }
    for (int i = 0; i < n; ++i) {
        if (has_pos[i] &&
            (pos_sum[i] < b.alpha - kCertTol || pos_sum[i] > 1.0 - b.alpha + kCertTol)) {
            std::ostringstream msg;
            msg << "positive in-weight sum " << pos_sum[i] << " outside [alpha, 1-alpha] = ["
                << b.alpha << ", " << 1.0 - b.alpha << "]";
            flag(i, msg.str());
        }
        if (has_neg[i] && neg_sum[i] < -b.beta - kCertTol) {
            std::ostringstream msg;
            msg << "negative in-weight sum " << neg_sum[i] << " below -beta = " << -b.beta;
            flag(i, msg.str());
        }
    }
    return report;
}

nlohmann::json CouplingReport::to_json() const {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& item : violations)
        v.push_back({{"vertex", item.vertex}, {"clause", item.clause}});
    return {{"passed", passed}, {"violations", v}};
}

bool is_neighbor_shared(const SignedDigraph& g) {
    const int n = g.vertices();
    Eigen::MatrixXd a = adjacency_matrix(g);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            bool witnessed = false;
            for (int i = 0; i < n && !witnessed; ++i)
                witnessed = i != p && i != q && a(p, i) > 0.0 && a(q, i) > 0.0;
            if (!witnessed) return false;
        }
    }
    return true;
}

double ergodic_coefficient(const GeneralStochasticMatrix& s) {
    const auto& m = s.entries();
    double worst = 0.0;
    for (Eigen::Index p = 0; p < m.rows(); ++p)
        for (Eigen::Index q = p + 1; q < m.rows(); ++q)
            worst = std::max(worst, 0.5 * (m.row(p) - m.row(q)).cwiseAbs().sum());
    return worst;
}

double shared_weight_margin(const GeneralStochasticMatrix& s) {
    const auto& m = s.entries();
    if (m.rows() < 2) return m.sum();
    double worst = std::numeric_limits<double>::infinity();
    for (Eigen::Index p = 0; p < m.rows(); ++p)
        for (Eigen::Index q = p + 1; q < m.rows(); ++q)
            worst = std::min(worst, m.row(p).cwiseMin(m.row(q)).sum());
    return worst;
}

SignedDigraph graph_from_stochastic(const GeneralStochasticMatrix& s, double tol) {
    const auto& m = s.entries();
    std::vector<GraphEdge> edges;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && std::abs(m(i, j)) > tol)
                edges.push_back({static_cast<int>(j), static_cast<int>(i), m(i, j)});
    return SignedDigraph(static_cast<int>(m.rows()), std::move(edges));
}

}  // namespace formation
