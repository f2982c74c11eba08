#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <string>

#include "mrsubdiv/errors.hpp"

namespace mrsubdiv::detail {

/// Fixed point of a small dense operator: the vector x with (I - M) x = 0,
/// normalized so its entries sum to one. The eigenvalue-1 eigenspace must be
/// one-dimensional; singular values of (I - M) below rank_tol * max(1, s_max)
/// count as zero.
inline Eigen::VectorXd unit_eigenvector(const Eigen::MatrixXd& m, double rank_tol = 1e-9) {
    const Eigen::Index n = m.rows();
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - m;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = rank_tol * std::max(1.0, sv(0));
    Eigen::Index null_dim = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (sv(i) <= cutoff) ++null_dim;
    }
    if (null_dim != 1) {
        throw NoUnitEigenvector("eigenvalue-1 eigenspace has dimension " + std::to_string(null_dim) +
                                " (expected 1)");
    }
    Eigen::VectorXd x = svd.matrixV().col(n - 1);
    const double total = x.sum();
    if (std::abs(total) < 1e-12) throw NoUnitEigenvector("fixed point has zero sum; cannot normalize");
    return x / total;
}

} // namespace mrsubdiv::detail
