#pragma once

#include "slidewin/series.hpp"

#include <Eigen/Dense>

#include <map>
#include <string>

namespace slidewin {

/// An r-dimensional subspace of R^w held as a w x r orthonormal basis.
class Subspace {
 public:
  /// Orthonormalizes the columns of `spanning`; throws
  /// Error(RankDeficientSubspace) if they are linearly dependent.
  static Subspace span_of(const Eigen::MatrixXd& spanning);

  /// Wraps a basis already known to be orthonormal (checked to 1e-10).
  static Subspace from_orthonormal(Eigen::MatrixXd basis);

  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  Eigen::Index ambient_dim() const noexcept { return basis_.rows(); }
  Eigen::Index dim() const noexcept { return basis_.cols(); }

  Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }

 private:
  explicit Subspace(Eigen::MatrixXd basis) : basis_(std::move(basis)) {}
  Eigen::MatrixXd basis_;
};

/// A measured quantity paired with the closed-form bound it should respect.
struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  /// False when the bound does not apply (e.g. non-positive snr - 1).
  bool applicable = true;
  std::map<std::string, double> components;

  /// Stores `measured` and recomputes `satisfied` as lhs <= rhs.
  void set_measured(double measured) {
    lhs = measured;
    satisfied = applicable && lhs <= rhs;
  }
};

/// ||P_{1-perp} mu_i||^2 / ||mu_i - mu||^2.
double flatness_ratio(const Eigen::VectorXd& mu_i, const Eigen::VectorXd& mu);

/// (8 w^2 ||x||_inf^2 + w^3 m ||x||_Lip^2) / ||x - mean(x) 1||^2.
BoundReport flatness_bound(const Timeseries& x, std::size_t w);

/// sqrt(sum_i sin^2 theta_i) over the principal angles between A and B.
double chordal_distance(const Subspace& A, const Subspace& B);

/// Cosines of the principal angles, clamped to [0, 1], in decreasing order.
Eigen::VectorXd principal_cosines(const Subspace& A, const Subspace& B);

/// span{cos(2 pi t / w), sin(2 pi t / w)} for t in [w]. Requires w >= 3.
Subspace fourier_pair_subspace(std::size_t w);

/// Span of the top-r left singular vectors of the centred columns of X.
Subspace pca_subspace(const Eigen::MatrixXd& X, Eigen::Index r);

/// (|b| / sqrt((4/pw)||e||_2^2 + (12/p)||e||_inf^2) - 1)^{-1}.
/// `applicable` is false when the quantity is not positive; the bound is 0
/// for identically zero noise.
BoundReport sine_bound(double b, std::size_t p, std::size_t w, const Timeseries& e);

struct CentroidLip {
  Eigen::VectorXd mu;
  double lip = 0.0;
};

/// Mean of the columns of X and its Lipschitz seminorm (0 when w == 1).
CentroidLip centroid_mean_and_lip(const WindowMatrix& X);

struct CirculantCheck {
  /// max |(A A^T)_{s,s'} - (b^2 p w / 2) cos(2 pi (s - s') / w)|
  double closed_form_deviation = 0.0;
  /// max |A A^T - (b^2 p w^2 / 4) P_F| with P_F the Fourier-pair projector.
  double projection_deviation = 0.0;
  /// Eigenvalues of A A^T in decreasing order.
  Eigen::VectorXd eigenvalues;
  /// b^2 p w^2 / 4
  double expected_eigenvalue = 0.0;
};

/// Builds A_{s,t} = b sin(2 pi (s + t - c) / w), s in [w], t in [pw], and
/// compares A A^T against its circulant closed form.
CirculantCheck circulant_check(double b, double c, std::size_t p, std::size_t w);

/// ||P_F (mu_i - mu)||^2 / ||mu_i - mu||^2 for the Fourier-pair subspace F.
double sinusoidal_fraction(const Eigen::VectorXd& mu_i, const Eigen::VectorXd& mu);

}  // namespace slidewin
