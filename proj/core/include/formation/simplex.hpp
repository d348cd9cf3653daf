#pragma once

#include <Eigen/Dense>

namespace formation {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    Eigen::VectorXd solution;
    int iterations = 0;
};

/// Minimize c'x subject to A x = b, x >= 0.
///
/// Dense two-phase tableau simplex with Bland's rule, so runs are
/// deterministic and cycle-free. Intended for the small decomposition
/// problems in this project (tens of variables); not a general solver.
LpResult solve_equality_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c, double pivot_tol = 1e-11);

}  // namespace formation
