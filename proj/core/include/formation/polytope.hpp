#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "formation/signed_graph.hpp"
#include "formation/tolerances.hpp"

namespace formation {

/// Finite generator set of a polytope (its extreme points, for the sets
/// built here). Points are duplicate-free by construction: the generators
/// have exact entries in {0, +-1/2, +-1}, so no floating comparison is
/// needed at generation time.
struct ExtremeSet {
    int dim = 0;
    std::vector<Eigen::VectorXd> points;

    Eigen::MatrixXd as_matrix() const;  // dim x count, one point per column

    bool contains_point(const Eigen::VectorXd& p, double tol = kPointTol) const;
    bool negation_closed(double tol = kPointTol) const;
    bool set_equal(const ExtremeSet& other, double tol = kPointTol) const;

    /// LP check that no point is a convex combination of the others.
    bool verify_extremality() const;
};

/// The 2n signed basis vectors, the extreme points of the l1 ball.
ExtremeSet cross_extremes(int n);

/// All (e_p - e_q)/2 over ordered pairs p != q, n(n-1) points, ordered
/// lexicographically in (p, q). Every point lies on the zero-sum hyperplane
/// and has l1 norm 1.
ExtremeSet section_extremes(int n);

/// {section point x e_j : j = 1, 2} in dimension 2n via the Kronecker
/// lift; 2n(n-1) points ordered lexicographically in (p, q, axis).
ExtremeSet lifted_extremes(int n);

/// Independent brute-force enumeration of the vertices of
/// {x : ||x||_1 <= 1} intersected with the zero-sum hyperplane: solve every
/// (n-1)-subset of facet boundaries together with the hyperplane, keep the
/// feasible solutions, deduplicate. Test oracle only; guarded to 2 <= n <= 6.
ExtremeSet section_vertices_oracle(int n);

bool l1_membership(const Eigen::VectorXd& x, double radius);

/// Membership in the polar of the crosspolytope, computed two ways (inner
/// products against every cross extreme, and the l-inf norm); the routes
/// must agree or a std::logic_error is thrown.
bool polar_membership(const Eigen::VectorXd& x);

struct MembershipCertificate {
    Eigen::VectorXd point;
    Eigen::VectorXd generator_weights;
    double weight_sum = 0.0;
    double residual = 0.0;  // l-inf reconstruction error
};

/// Solve min sum(w) s.t. gens * w = x, w >= 0 with the dense simplex.
/// weight_sum <= 1 certifies x in conv(gens) for negation-closed generator
/// sets. Throws DecompositionInfeasible when x is outside cone(gens).
MembershipCertificate min_weight_decomposition(const Eigen::VectorXd& x, const ExtremeSet& gens);

struct LemmaReport {
    std::string lemma;
    nlohmann::json hypotheses;
    double worst_slack = 0.0;
    long sample_count = 0;
    bool passed = false;
    std::string note;

    nlohmann::json to_json() const;
};

/// Images of the lifted extremes under S^T x I2: l1 norm within
/// 1 - alpha + 2*beta, still on the lifted hyperplane, and decomposable
/// over the lifted extremes with weight sum below the same bound.
/// Throws HypothesisViolation unless the graph recovered from S passes
/// validate_coupling and is_neighbor_shared.
LemmaReport check_lemma3(const GeneralStochasticMatrix& s, const CouplingBounds& b);

/// Sampled two-sided check that the S^T image of the lifted section equals
/// the S^T image of the crosspolytope restricted to the lifted hyperplane,
/// plus the l1 inflation bound ||S^T x||_1 <= 1 + 2*beta over the
/// crosspolytope.
LemmaReport check_lemma4(const GeneralStochasticMatrix& s, const CouplingBounds& b,
                         int samples = kInclusionSamples,
                         unsigned long long seed = kSamplingSeed);

/// h * (polar of the crosspolytope) stays inside the crosspolytope iff
/// h <= 1/(2n); the arithmetic test is cross-checked on sampled points.
bool check_prop3(double h, int n);

/// Lambda * R maps the lifted section into the polar intersected with the
/// lifted hyperplane, for any block rotation.
LemmaReport check_prop4(const Eigen::VectorXd& angles, int samples = kInclusionSamples,
                        unsigned long long seed = kSamplingSeed);

/// h * Lambda * R and h * Lambda * S^T * R keep the lifted section inside
/// itself when h <= 1/(2n) and the lemma-3 hypotheses hold.
LemmaReport check_lemma5(double h, const GeneralStochasticMatrix& s,
                         const Eigen::VectorXd& angles, const CouplingBounds& b);

}  // namespace formation
