#include "formation/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "formation/linalg.hpp"
#include "formation/simplex.hpp"

namespace formation {

namespace {

Eigen::VectorXd dirichlet_weights(std::mt19937_64& rng, int m) {
    std::exponential_distribution<double> exp1(1.0);
    Eigen::VectorXd w(m);
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        w(i) = exp1(rng);
        total += w(i);
    }
    return w / total;
}

// Validates the shared hypotheses of lemmas 3-5: the graph recovered from S
// satisfies the coupling bounds and is neighbor shared.
void require_stochastic_hypotheses(const GeneralStochasticMatrix& s, const CouplingBounds& b,
                                   const char* lemma) {
    SignedDigraph g = graph_from_stochastic(s);
    CouplingReport coupling = validate_coupling(g, b);
    if (!coupling.passed) {
        std::ostringstream msg;
        msg << lemma << ": coupling bounds violated (vertex " << coupling.violations[0].vertex
            << ": " << coupling.violations[0].clause << ")";
        throw HypothesisViolation(msg.str());
    }
    if (!s.in_s_beta(b.beta)) {
        std::ostringstream msg;
        msg << lemma << ": matrix leaves S_beta, row negative mass " << s.max_row_negative_mass();
        throw HypothesisViolation(msg.str());
    }
    if (!is_neighbor_shared(g))
        throw HypothesisViolation(std::string(lemma) + ": graph is not neighbor shared");
}

nlohmann::json bounds_json(const CouplingBounds& b) {
    return {{"alpha", b.alpha}, {"beta", b.beta}};
}

}  // namespace

Eigen::MatrixXd ExtremeSet::as_matrix() const {
    Eigen::MatrixXd m(dim, static_cast<Eigen::Index>(points.size()));
    for (size_t i = 0; i < points.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = points[i];
    return m;
}

bool ExtremeSet::contains_point(const Eigen::VectorXd& p, double tol) const {
    for (const auto& q : points)
        if ((q - p).lpNorm<Eigen::Infinity>() <= tol) return true;
    return false;
}

bool ExtremeSet::negation_closed(double tol) const {
    for (const auto& p : points)
        if (!contains_point(-p, tol)) return false;
    return true;
}

bool ExtremeSet::set_equal(const ExtremeSet& other, double tol) const {
    if (dim != other.dim || points.size() != other.points.size()) return false;
    for (const auto& p : points)
        if (!other.contains_point(p, tol)) return false;
    for (const auto& p : other.points)
        if (!contains_point(p, tol)) return false;
    return true;
}

bool ExtremeSet::verify_extremality() const {
    const auto count = static_cast<Eigen::Index>(points.size());
    if (count < 2) return true;
    for (Eigen::Index skip = 0; skip < count; ++skip) {
        // Feasibility of: others * w = point, sum w = 1, w >= 0.
        Eigen::MatrixXd a(dim + 1, count - 1);
        Eigen::VectorXd b(dim + 1);
        Eigen::Index col = 0;
        for (Eigen::Index i = 0; i < count; ++i) {
            if (i == skip) continue;
            a.col(col).head(dim) = points[static_cast<size_t>(i)];
            a(dim, col) = 1.0;
            ++col;
        }
        b.head(dim) = points[static_cast<size_t>(skip)];
        b(dim) = 1.0;
        LpResult lp = solve_equality_lp(a, b, Eigen::VectorXd::Zero(count - 1));
        if (lp.status == LpStatus::optimal) return false;
    }
    return true;
}

ExtremeSet cross_extremes(int n) {
    if (n < 1) throw std::invalid_argument("cross_extremes: n must be positive");
    ExtremeSet out;
    out.dim = n;
    out.points.reserve(2 * static_cast<size_t>(n));
    for (int sign : {+1, -1})
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e(i) = sign;
            out.points.push_back(e);
        }
    return out;
}

ExtremeSet section_extremes(int n) {
    if (n < 2) throw std::invalid_argument("section_extremes: n must be at least 2");
    ExtremeSet out;
    out.dim = n;
    out.points.reserve(static_cast<size_t>(n) * (n - 1));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e(p) = 0.5;
            e(q) = -0.5;
            out.points.push_back(e);
        }
    return out;
}

ExtremeSet lifted_extremes(int n) {
    ExtremeSet base = section_extremes(n);
    ExtremeSet out;
    out.dim = 2 * n;
    out.points.reserve(base.points.size() * 2);
    for (const auto& e : base.points)
        for (int axis = 0; axis < 2; ++axis) {
            Eigen::VectorXd lifted = Eigen::VectorXd::Zero(2 * n);
            for (int i = 0; i < n; ++i) lifted(2 * i + axis) = e(i);
            out.points.push_back(lifted);
        }
    return out;
}

namespace {

// Solve rows * x = rhs for one candidate vertex; rows are +-1 sign patterns
// plus the all-ones hyperplane row. Returns false on a singular system.
bool solve_candidate(double a[7][8], int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-9) return false;
        if (pivot != col)
            for (int c = col; c <= n; ++c) std::swap(a[pivot][c], a[col][c]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    for (int r = 0; r < n; ++r) a[r][n] /= a[r][r];
    return true;
}

}  // namespace

ExtremeSet section_vertices_oracle(int n) {
    if (n < 2) throw std::invalid_argument("section_vertices_oracle: n must be at least 2");
    if (n > 6)
        throw DimensionTooLarge("section_vertices_oracle guards against n > 6 (facet blow-up)");

    const int facets = 1 << n;
    const int k = n - 1;
    ExtremeSet out;
    out.dim = n;

    std::vector<int> combo(k);
    std::iota(combo.begin(), combo.end(), 0);
    std::vector<double> x(n);
    for (;;) {
        double a[7][8] = {};
        for (int c = 0; c < n; ++c) a[0][c] = 1.0;  // hyperplane row
        a[0][n] = 0.0;
        for (int r = 0; r < k; ++r) {
            for (int c = 0; c < n; ++c) a[r + 1][c] = (combo[r] >> c & 1) ? 1.0 : -1.0;
            a[r + 1][n] = 1.0;
        }
        if (solve_candidate(a, n)) {
            double l1 = 0.0;
            double sum = 0.0;
            for (int c = 0; c < n; ++c) {
                x[c] = a[c][n];
                l1 += std::abs(x[c]);
                sum += x[c];
            }
            if (l1 <= 1.0 + kPointTol && std::abs(sum) <= kPointTol) {
                Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(x.data(), n);
                if (!out.contains_point(v)) out.points.push_back(v);
            }
        }
        int i = k - 1;
        while (i >= 0 && combo[i] == facets - k + i) --i;
        if (i < 0) break;
        ++combo[i];
        for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const Eigen::VectorXd& a_, const Eigen::VectorXd& b_) {
                  for (Eigen::Index i = 0; i < a_.size(); ++i)
                      if (a_(i) != b_(i)) return a_(i) < b_(i);
                  return false;
              });
    return out;
}

bool l1_membership(const Eigen::VectorXd& x, double radius) {
    return x.lpNorm<1>() <= radius + kCertTol;
}

bool polar_membership(const Eigen::VectorXd& x) {
    const int dim = static_cast<int>(x.size());
    double max_inner = -std::numeric_limits<double>::infinity();
    for (const auto& v : cross_extremes(dim).points)
        max_inner = std::max(max_inner, x.dot(v));
    bool by_extremes = max_inner <= 1.0 + kCertTol;
    bool by_norm = x.lpNorm<Eigen::Infinity>() <= 1.0 + kCertTol;
    if (by_extremes != by_norm)
        throw std::logic_error("polar_membership: extreme-point and norm routes disagree");
    return by_norm;
}

MembershipCertificate min_weight_decomposition(const Eigen::VectorXd& x, const ExtremeSet& gens) {
    if (x.size() != gens.dim)
        throw std::invalid_argument("min_weight_decomposition: dimension mismatch");
    Eigen::MatrixXd g = gens.as_matrix();
    LpResult lp = solve_equality_lp(g, x, Eigen::VectorXd::Ones(g.cols()));
    if (lp.status != LpStatus::optimal)
        throw DecompositionInfeasible("target is outside the cone of the generators");
    MembershipCertificate cert;
    cert.point = x;
    cert.generator_weights = lp.solution;
    cert.weight_sum = lp.objective;
    cert.residual = (g * lp.solution - x).lpNorm<Eigen::Infinity>();
    return cert;
}

nlohmann::json LemmaReport::to_json() const {
    return {{"lemma", lemma},           {"hypotheses", hypotheses},
            {"worst_slack", worst_slack}, {"sample_count", sample_count},
            {"passed", passed},         {"note", note}};
}

LemmaReport check_lemma3(const GeneralStochasticMatrix& s, const CouplingBounds& b) {
    require_stochastic_hypotheses(s, b, "lemma3");
    const int n = s.size();
    const double eta_bound = 1.0 - (b.alpha - 2.0 * b.beta);

    ExtremeSet gens = lifted_extremes(n);
    Eigen::MatrixXd st2 = kron_with_identity2(s.entries().transpose());

    LemmaReport report;
    report.lemma = "lemma3";
    report.hypotheses = {{"n", n},
                         {"bounds", bounds_json(b)},
                         {"eta_bound", eta_bound}};
    report.passed = true;
    report.worst_slack = std::numeric_limits<double>::infinity();

    for (const auto& e : gens.points) {
        Eigen::VectorXd image = st2 * e;
        double l1 = image.lpNorm<1>();
        double plane = lifted_hyperplane_products(image).cwiseAbs().maxCoeff();
        MembershipCertificate cert = min_weight_decomposition(image, gens);
        double slack = eta_bound - std::max(l1, cert.weight_sum);
        report.worst_slack = std::min(report.worst_slack, slack);
        ++report.sample_count;
        if (l1 > eta_bound + kCertTol || plane > kMatrixTol ||
            cert.weight_sum > eta_bound + kCertTol || cert.residual > kLpResidualTol) {
            report.passed = false;
            report.note = "generator image escapes the contracted section";
        }
    }
    return report;
}

LemmaReport check_lemma4(const GeneralStochasticMatrix& s, const CouplingBounds& b, int samples,
                         unsigned long long seed) {
    require_stochastic_hypotheses(s, b, "lemma4");
    const int n = s.size();
    const double inflation_bound = 1.0 + 2.0 * b.beta;

    ExtremeSet lifted = lifted_extremes(n);
    ExtremeSet cross = cross_extremes(2 * n);
    Eigen::MatrixXd lifted_mat = lifted.as_matrix();
    Eigen::MatrixXd cross_mat = cross.as_matrix();
    Eigen::MatrixXd st2 = kron_with_identity2(s.entries().transpose());
    Eigen::MatrixXd cross_images = st2 * cross_mat;    // generators of S^T P_2N
    Eigen::MatrixXd lifted_images = st2 * lifted_mat;  // generators of S^T conv(Vbar)

    LemmaReport report;
    report.lemma = "lemma4";
    report.hypotheses = {{"n", n},
                         {"bounds", bounds_json(b)},
                         {"inflation_bound", inflation_bound},
                         {"samples", samples}};
    report.passed = true;
    report.worst_slack = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(seed);
    const Eigen::Index m = lifted_mat.cols();
    const Eigen::VectorXd ones_cross = Eigen::VectorXd::Ones(cross_images.cols());
    const Eigen::VectorXd ones_lift = Eigen::VectorXd::Ones(lifted_images.cols());

    auto check_point = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd y = st2 * x;
        ++report.sample_count;

        double plane = lifted_hyperplane_products(y).cwiseAbs().maxCoeff();
        if (plane > kMatrixTol) {
            report.passed = false;
            report.note = "image leaves the lifted hyperplane";
        }
        // Forward: y belongs to S^T P_2N.
        LpResult fwd = solve_equality_lp(cross_images, y, ones_cross);
        if (fwd.status != LpStatus::optimal || fwd.objective > 1.0 + kCertTol) {
            report.passed = false;
            report.note = "image misses S^T P_2N";
        } else {
            report.worst_slack = std::min(report.worst_slack, 1.0 - fwd.objective);
        }
        // Converse: y has a preimage decomposition inside conv(Vbar).
        LpResult back = solve_equality_lp(lifted_images, y, ones_lift);
        if (back.status != LpStatus::optimal || back.objective > 1.0 + kCertTol) {
            report.passed = false;
            report.note = "no preimage combination inside the lifted section";
        } else {
            report.worst_slack = std::min(report.worst_slack, 1.0 - back.objective);
        }
    };

    for (const auto& e : lifted.points) check_point(e);
    for (int i = 0; i < samples; ++i)
        check_point(lifted_mat * dirichlet_weights(rng, static_cast<int>(m)));

    // l1 inflation over the whole crosspolytope.
    for (int i = 0; i < samples; ++i) {
        Eigen::VectorXd x = cross_mat * dirichlet_weights(rng, static_cast<int>(cross_mat.cols()));
        double l1 = (st2 * x).lpNorm<1>();
        report.worst_slack = std::min(report.worst_slack, inflation_bound - l1);
        ++report.sample_count;
        if (l1 > inflation_bound + kCertTol) {
            report.passed = false;
            report.note = "crosspolytope image exceeds the 1+2*beta inflation bound";
        }
    }
    return report;
}

bool check_prop3(double h, int n) {
    if (h <= 0.0) throw std::invalid_argument("check_prop3: h must be positive");
    if (n < 1) throw std::invalid_argument("check_prop3: n must be positive");
    const bool admissible = h <= 1.0 / (2.0 * n) + kCertTol;
    if (!admissible) return false;
    if (h > 1.0 / (2.0 * n)) return true;  // tie-tolerance band: arithmetic only

    // Constructive cross-check on points of the polar (l-inf ball).
    std::mt19937_64 rng(kSamplingSeed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const int dim = 2 * n;
    Eigen::VectorXd x(dim);
    for (int trial = 0; trial < 1000; ++trial) {
        for (int i = 0; i < dim; ++i)
            x(i) = (trial % 2 == 0) ? (unit(rng) < 0.0 ? -1.0 : 1.0) : unit(rng);
        if (!l1_membership(h * x, 1.0))
            throw std::logic_error("check_prop3: sampled point contradicts the arithmetic test");
    }
    return true;
}

LemmaReport check_prop4(const Eigen::VectorXd& angles, int samples, unsigned long long seed) {
    const int n = static_cast<int>(angles.size());
    if (n < 2) throw std::invalid_argument("check_prop4: need at least two agents");

    ExtremeSet lifted = lifted_extremes(n);
    Eigen::MatrixXd lifted_mat = lifted.as_matrix();
    Eigen::MatrixXd rot = block_rotation_matrix(angles);
    Eigen::MatrixXd lambda =
        kron_with_identity2(Eigen::MatrixXd::Identity(n, n) -
                            Eigen::MatrixXd::Constant(n, n, 1.0 / n));
    Eigen::MatrixXd map = lambda * rot;

    LemmaReport report;
    report.lemma = "prop4";
    report.hypotheses = {{"n", n}, {"samples", samples}};
    report.passed = true;
    report.worst_slack = std::numeric_limits<double>::infinity();

    auto check_point = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd z = map * x;
        ++report.sample_count;
        double inf_norm = z.lpNorm<Eigen::Infinity>();
        double plane = lifted_hyperplane_products(z).cwiseAbs().maxCoeff();
        report.worst_slack = std::min(report.worst_slack, 1.0 - inf_norm);
        if (!polar_membership(z) || plane > kMatrixTol) {
            report.passed = false;
            report.note = "projected rotation leaves the polar or the hyperplane";
        }
    };

    for (const auto& e : lifted.points) check_point(e);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < samples; ++i)
        check_point(lifted_mat * dirichlet_weights(rng, static_cast<int>(lifted_mat.cols())));
    return report;
}

LemmaReport check_lemma5(double h, const GeneralStochasticMatrix& s,
                         const Eigen::VectorXd& angles, const CouplingBounds& b) {
    require_stochastic_hypotheses(s, b, "lemma5");
    const int n = s.size();
    if (angles.size() != n) throw HypothesisViolation("lemma5: angle count differs from n");
    if (h <= 0.0 || h > 1.0 / (2.0 * n) + kCertTol)
        throw HypothesisViolation("lemma5: h outside (0, 1/(2n)]");

    ExtremeSet gens = lifted_extremes(n);
    Eigen::MatrixXd rot = block_rotation_matrix(angles);
    Eigen::MatrixXd st2 = kron_with_identity2(s.entries().transpose());
    Eigen::MatrixXd lambda =
        kron_with_identity2(Eigen::MatrixXd::Identity(n, n) -
                            Eigen::MatrixXd::Constant(n, n, 1.0 / n));
    Eigen::MatrixXd rot_map = h * lambda * rot;
    Eigen::MatrixXd mix_map = h * lambda * st2 * rot;

    LemmaReport report;
    report.lemma = "lemma5";
    report.hypotheses = {{"n", n}, {"bounds", bounds_json(b)}, {"h", h}};
    report.passed = true;
    report.worst_slack = std::numeric_limits<double>::infinity();

    for (const auto& e : gens.points) {
        for (const Eigen::MatrixXd* map : {&rot_map, &mix_map}) {
            MembershipCertificate cert = min_weight_decomposition(*map * e, gens);
            report.worst_slack = std::min(report.worst_slack, 1.0 - cert.weight_sum);
            ++report.sample_count;
            if (cert.weight_sum > 1.0 + kCertTol || cert.residual > kLpResidualTol) {
                report.passed = false;
                report.note = "scaled projected image escapes the lifted section";
            }
        }
    }
    return report;
}

}  // namespace formation
