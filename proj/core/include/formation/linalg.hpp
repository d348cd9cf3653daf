#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace formation {

/// m (x) I2, the block form used to act on stacked planar vectors.
inline Eigen::MatrixXd kron_with_identity2(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * m.rows(), 2 * m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out(2 * i, 2 * j) = m(i, j);
            out(2 * i + 1, 2 * j + 1) = m(i, j);
        }
    return out;
}

/// Inner products of x with 1_n (x) e_j for j = 1, 2; zero exactly when x
/// lies on the lifted hyperplane.
inline Eigen::Vector2d lifted_hyperplane_products(const Eigen::VectorXd& x) {
    Eigen::Vector2d sums = Eigen::Vector2d::Zero();
    for (Eigen::Index i = 0; i + 1 < x.size(); i += 2) {
        sums(0) += x(i);
        sums(1) += x(i + 1);
    }
    return sums;
}

inline Eigen::Matrix2d rotation2(double theta) {
    Eigen::Matrix2d r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

inline Eigen::MatrixXd block_rotation_matrix(const Eigen::VectorXd& angles) {
    const auto n = angles.size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) out.block<2, 2>(2 * i, 2 * i) = rotation2(angles(i));
    return out;
}

}  // namespace formation
