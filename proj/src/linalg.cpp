#include "slidewin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace slidewin {

namespace {

struct Orthogonalized {
  Eigen::MatrixXd W;  // G * J, mutually orthogonal columns
  Eigen::MatrixXd J;  // accumulated rotations
  int sweeps = 0;
  bool converged = false;
};

Orthogonalized hestenes(Eigen::MatrixXd G, int max_sweeps) {
  const Eigen::Index q = G.cols();
  Eigen::MatrixXd J = Eigen::MatrixXd::Identity(q, q);
  const double eps = std::numeric_limits<double>::epsilon();

  Orthogonalized out;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i + 1 < q; ++i) {
      for (Eigen::Index j = i + 1; j < q; ++j) {
        const double alpha = G.col(i).squaredNorm();
        const double beta = G.col(j).squaredNorm();
        const double gamma = G.col(i).dot(G.col(j));
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;

        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        for (Eigen::Index r = 0; r < G.rows(); ++r) {
          const double gi = G(r, i);
          const double gj = G(r, j);
          G(r, i) = c * gi - s * gj;
          G(r, j) = s * gi + c * gj;
        }
        for (Eigen::Index r = 0; r < q; ++r) {
          const double ji = J(r, i);
          const double jj = J(r, j);
          J(r, i) = c * ji - s * jj;
          J(r, j) = s * ji + c * jj;
        }
      }
    }
    out.sweeps = sweep + 1;
    if (!rotated) {
      out.converged = true;
      break;
    }
  }
  out.W = std::move(G);
  out.J = std::move(J);
  return out;
}

}  // namespace

Svd jacobi_svd(const Eigen::MatrixXd& A, int max_sweeps) {
  const bool transpose = A.rows() < A.cols();
  Orthogonalized h = hestenes(transpose ? Eigen::MatrixXd(A.transpose()) : A, max_sweeps);

  const Eigen::Index q = h.W.cols();
  Eigen::VectorXd norms(q);
  for (Eigen::Index j = 0; j < q; ++j) norms(j) = h.W.col(j).norm();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(q));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return norms(a) > norms(b); });

  // G = W J^T with W = Q diag(norms): the normalized W columns are the left
  // singular vectors of G and J holds its right singular vectors.
  Eigen::MatrixXd left(h.W.rows(), q);
  Eigen::MatrixXd right(q, q);
  Svd out;
  out.values.resize(q);
  for (Eigen::Index k = 0; k < q; ++k) {
    const Eigen::Index j = order[static_cast<std::size_t>(k)];
    out.values(k) = norms(j);
    if (norms(j) > 0.0) {
      left.col(k) = h.W.col(j) / norms(j);
    } else {
      left.col(k).setZero();
    }
    right.col(k) = h.J.col(j);
  }
  out.sweeps = h.sweeps;
  out.converged = h.converged;
  if (transpose) {
    out.U = std::move(right);
    out.V = std::move(left);
  } else {
    out.U = std::move(left);
    out.V = std::move(right);
  }
  return out;
}

Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values, double tol) {
  if (singular_values.size() == 0) return 0;
  const double top = singular_values.maxCoeff();
  if (top <= 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > tol * top) ++rank;
  }
  return rank;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& vectors, double drop_tol) {
  Eigen::MatrixXd basis(vectors.rows(), vectors.cols());
  Eigen::Index r = 0;
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::VectorXd v = vectors.col(j);
    const double original = v.norm();
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < r; ++i) v -= basis.col(i).dot(v) * basis.col(i);
    }
    const double residual = v.norm();
    if (residual <= drop_tol * original) continue;
    basis.col(r++) = v / residual;
  }
  return basis.leftCols(r);
}

}  // namespace slidewin
