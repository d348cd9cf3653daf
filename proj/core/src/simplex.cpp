#include "formation/simplex.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <vector>

namespace formation {

namespace {

// Tableau layout: m rows, columns [0, n) structural, [n, n+m) artificial,
// column n+m holds the right-hand side. The objective row is kept separately.
class Tableau {
  public:
    Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol)
        : m_(static_cast<int>(A.rows())), n_(static_cast<int>(A.cols())), tol_(tol),
          t_(Eigen::MatrixXd::Zero(m_, n_ + m_ + 1)), basis_(m_) {
        t_.block(0, 0, m_, n_) = A;
        t_.col(n_ + m_) = b;
        for (int i = 0; i < m_; ++i) {
            if (t_(i, n_ + m_) < 0.0) t_.row(i) = -t_.row(i);
            t_(i, n_ + i) = 1.0;
            basis_[i] = n_ + i;
        }
    }

    // One simplex phase over the given objective; costs has size n_ + m_.
    // Returns false when an unbounded ray is found.
    bool minimize(const Eigen::VectorXd& costs, bool allow_artificial, int* iterations) {
        for (;;) {
            Eigen::VectorXd y = reduced_costs(costs);
            int enter = -1;
            int limit = allow_artificial ? n_ + m_ : n_;
            for (int j = 0; j < limit; ++j) {  // Bland: first improving column
                if (y(j) < -tol_) { enter = j; break; }
            }
            if (enter < 0) return true;

            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                double a = t_(i, enter);
                if (a > tol_) {
                    double ratio = t_(i, n_ + m_) / a;
                    if (ratio < best - tol_ ||
                        (ratio < best + tol_ && (leave < 0 || basis_[i] < basis_[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
            ++*iterations;
        }
    }

    void pivot(int row, int col) {
        t_.row(row) /= t_(row, col);
        for (int i = 0; i < m_; ++i) {
            if (i != row && std::abs(t_(i, col)) > 0.0) t_.row(i) -= t_(i, col) * t_.row(row);
        }
        basis_[row] = col;
    }

    Eigen::VectorXd reduced_costs(const Eigen::VectorXd& costs) const {
        // y — the dual prices implied by the current basis — is recovered from
        // the basic costs so no running objective row is maintained.
        Eigen::VectorXd cb(m_);
        for (int i = 0; i < m_; ++i) cb(i) = costs(basis_[i]);
        return costs - t_.leftCols(n_ + m_).transpose() * cb;
    }

    bool is_basic(int col) const {
        for (int b : basis_) if (b == col) return true;
        return false;
    }

    // Pivot artificials out of the basis wherever a structural column allows it.
    void purge_artificials(int* iterations) {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            for (int j = 0; j < n_; ++j) {
                if (std::abs(t_(i, j)) > tol_) {
                    pivot(i, j);
                    ++*iterations;
                    break;
                }
            }
        }
    }

    double rhs(int i) const { return t_(i, n_ + m_); }
    int basis(int i) const { return basis_[i]; }
    int rows() const { return m_; }

  private:
    int m_, n_;
    double tol_;
    Eigen::MatrixXd t_;
    std::vector<int> basis_;
};

}  // namespace

LpResult solve_equality_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c, double pivot_tol) {
    assert(A.rows() == b.size());
    assert(A.cols() == c.size());
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());

    LpResult result;
    Tableau tab(A, b, pivot_tol);

    // Phase 1: minimize the sum of artificials.
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
    phase1.tail(m).setOnes();
    tab.minimize(phase1, true, &result.iterations);

    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
        if (tab.basis(i) >= n) infeas += tab.rhs(i);
    if (infeas > 1e-8) {
        result.status = LpStatus::infeasible;
        return result;
    }
    tab.purge_artificials(&result.iterations);

    // Phase 2: artificial columns are frozen out of the pricing loop.
    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
    phase2.head(n) = c;
    bool bounded = tab.minimize(phase2, false, &result.iterations);
    if (!bounded) {
        result.status = LpStatus::unbounded;
        return result;
    }

    result.solution = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) {
        if (tab.basis(i) < n) result.solution(tab.basis(i)) = std::max(0.0, tab.rhs(i));
    }
    result.objective = c.dot(result.solution);
    result.status = LpStatus::optimal;
    return result;
}

}  // namespace formation
