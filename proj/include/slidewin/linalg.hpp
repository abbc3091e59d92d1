#pragma once

#include <Eigen/Dense>

namespace slidewin {

/// Thin singular value decomposition A = U * diag(values) * V^T with
/// singular values sorted in decreasing order.
struct Svd {
  Eigen::MatrixXd U;
  Eigen::VectorXd values;
  Eigen::MatrixXd V;
  int sweeps = 0;
  bool converged = false;
};

/// One-sided (Hestenes) Jacobi SVD. Orthogonalizes the columns of A or A^T,
/// whichever has fewer columns. Singular vectors belonging to zero singular
/// values on the long side are returned as zero columns.
Svd jacobi_svd(const Eigen::MatrixXd& A, int max_sweeps = 80);

/// Numerical rank: count of singular values above tol * largest.
Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values, double tol = 1e-12);

/// Orthonormal basis for the column span of `vectors` via Gram-Schmidt with one
/// reorthogonalization pass. Columns whose residual norm falls below
/// drop_tol times their original norm are dropped.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& vectors, double drop_tol = 1e-10);

}  // namespace slidewin
