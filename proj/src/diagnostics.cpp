#include "slidewin/diagnostics.hpp"

#include "slidewin/error.hpp"
#include "slidewin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace slidewin {

Subspace Subspace::span_of(const Eigen::MatrixXd& spanning) {
  Eigen::MatrixXd basis = orthonormalize(spanning);
  if (basis.cols() != spanning.cols() || basis.cols() == 0) {
    throw Error(ErrorCode::RankDeficientSubspace,
                "spanning set of " + std::to_string(spanning.cols()) + " vectors has rank " +
                    std::to_string(basis.cols()));
  }
  return Subspace(std::move(basis));
}

Subspace Subspace::from_orthonormal(Eigen::MatrixXd basis) {
  if (basis.cols() < 1 || basis.cols() > basis.rows()) {
    throw Error(ErrorCode::InvalidArgument, "subspace dimension must lie in [1, w]");
  }
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  const double err = (gram - Eigen::MatrixXd::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw Error(ErrorCode::InvalidArgument,
                "basis is not orthonormal (Gram deviation " + std::to_string(err) + ")");
  }
  return Subspace(std::move(basis));
}

double flatness_ratio(const Eigen::VectorXd& mu_i, const Eigen::VectorXd& mu) {
  const double offset = (mu_i - mu).squaredNorm();
  if (offset == 0.0) {
    throw Error(ErrorCode::DegenerateCentroid, "centroid coincides with the global mean");
  }
  const Eigen::VectorXd perp = mu_i.array() - mu_i.mean();
  return perp.squaredNorm() / offset;
}

BoundReport flatness_bound(const Timeseries& x, std::size_t w) {
  if (x.size() < 2) {
    throw Error(ErrorCode::InsufficientLength, "flatness bound needs m >= 2");
  }
  const auto [mean, centred] = centered_norms(x);
  if (centred == 0.0) {
    throw Error(ErrorCode::DegenerateDenominator,
                "series is constant; ||x - mean 1||_2 = 0 leaves the flatness bound undefined");
  }
  const double sup = sup_norm(x);
  const double lip = lipschitz_seminorm(x);
  const double wd = static_cast<double>(w);
  const double md = static_cast<double>(x.size());

  BoundReport report;
  report.components = {{"sup_norm", sup},    {"lipschitz", lip},
                       {"mean", mean},       {"centered_l2", centred},
                       {"w", wd},            {"m", md}};
  report.rhs = (8.0 * wd * wd * sup * sup + wd * wd * wd * md * lip * lip) / (centred * centred);
  report.set_measured(0.0);
  return report;
}

Eigen::VectorXd principal_cosines(const Subspace& A, const Subspace& B) {
  if (A.dim() != B.dim() || A.ambient_dim() != B.ambient_dim()) {
    throw Error(ErrorCode::InvalidArgument, "principal angles need subspaces of equal dimension");
  }
  const Eigen::MatrixXd cross = A.basis().transpose() * B.basis();
  Eigen::VectorXd cosines = jacobi_svd(cross).values;
  return cosines.cwiseMax(0.0).cwiseMin(1.0);
}

double chordal_distance(const Subspace& A, const Subspace& B) {
  const Eigen::VectorXd cosines = principal_cosines(A, B);
  const double r = static_cast<double>(cosines.size());
  return std::sqrt(std::max(0.0, r - cosines.squaredNorm()));
}

Subspace fourier_pair_subspace(std::size_t w) {
  if (w < 3) {
    throw Error(ErrorCode::RankDeficientSubspace,
                "sin(2 pi t / w) vanishes for w <= 2; the Fourier pair is rank deficient");
  }
  Eigen::MatrixXd pair(static_cast<Eigen::Index>(w), 2);
  for (std::size_t t = 0; t < w; ++t) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(w);
    pair(static_cast<Eigen::Index>(t), 0) = std::cos(angle);
    pair(static_cast<Eigen::Index>(t), 1) = std::sin(angle);
  }
  return Subspace::span_of(pair);
}

Subspace pca_subspace(const Eigen::MatrixXd& X, Eigen::Index r) {
  const Eigen::MatrixXd centred = X.colwise() - X.rowwise().mean();
  const Svd svd = jacobi_svd(centred);
  if (numerical_rank(svd.values) < r) {
    throw Error(ErrorCode::RankDeficientSubspace,
                "centred data has fewer than " + std::to_string(r) + " principal directions");
  }
  return Subspace::from_orthonormal(svd.U.leftCols(r));
}

BoundReport sine_bound(double b, std::size_t p, std::size_t w, const Timeseries& e) {
  if (p < 1 || w < 3) {
    throw Error(ErrorCode::InvalidArgument, "sine bound needs p >= 1 and w >= 3");
  }
  if (e.size() != p * w + w - 1) {
    throw Error(ErrorCode::InvalidArgument, "noise length must equal p w + w - 1");
  }
  const double pd = static_cast<double>(p);
  const double wd = static_cast<double>(w);
  double l2sq = 0.0;
  for (double v : e.values()) l2sq += v * v;
  const double sup = sup_norm(e);

  BoundReport report;
  report.components = {{"b", b},           {"p", pd},      {"w", wd},
                       {"noise_l2", std::sqrt(l2sq)}, {"noise_sup", sup}};
  const double noise_scale = std::sqrt(4.0 / (pd * wd) * l2sq + 12.0 / pd * sup * sup);
  if (noise_scale == 0.0) {
    report.components["snr"] = std::numeric_limits<double>::infinity();
    report.rhs = 0.0;
    report.applicable = true;
  } else {
    const double snr = std::abs(b) / noise_scale;
    report.components["snr"] = snr;
    report.rhs = 1.0 / (snr - 1.0);
    report.applicable = report.rhs > 0.0;
  }
  report.set_measured(0.0);
  return report;
}

CentroidLip centroid_mean_and_lip(const WindowMatrix& X) {
  CentroidLip out;
  out.mu = X.data.rowwise().mean();
  if (out.mu.size() >= 2) {
    out.lip = lipschitz_seminorm(std::span<const double>(out.mu.data(), static_cast<std::size_t>(out.mu.size())));
  }
  return out;
}

CirculantCheck circulant_check(double b, double c, std::size_t p, std::size_t w) {
  if (p < 1 || w < 3) {
    throw Error(ErrorCode::InvalidArgument, "circulant check needs p >= 1 and w >= 3");
  }
  const auto rows = static_cast<Eigen::Index>(w);
  const auto cols = static_cast<Eigen::Index>(p * w);
  const double wd = static_cast<double>(w);
  const double pd = static_cast<double>(p);
  const double two_pi = 2.0 * std::numbers::pi;

  Eigen::MatrixXd A(rows, cols);
  for (Eigen::Index s = 0; s < rows; ++s) {
    for (Eigen::Index t = 0; t < cols; ++t) {
      A(s, t) = b * std::sin(two_pi * (static_cast<double>(s + t) - c) / wd);
    }
  }
  const Eigen::MatrixXd gram = A * A.transpose();

  Eigen::MatrixXd closed(rows, rows);
  for (Eigen::Index s = 0; s < rows; ++s) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      closed(s, r) = b * b * pd * wd / 2.0 * std::cos(two_pi * static_cast<double>(s - r) / wd);
    }
  }

  CirculantCheck out;
  out.expected_eigenvalue = b * b * pd * wd * wd / 4.0;
  out.closed_form_deviation = (gram - closed).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd scaled = out.expected_eigenvalue * fourier_pair_subspace(w).projector();
  out.projection_deviation = (gram - scaled).cwiseAbs().maxCoeff();
  out.eigenvalues = jacobi_svd(A).values.array().square();
  return out;
}

double sinusoidal_fraction(const Eigen::VectorXd& mu_i, const Eigen::VectorXd& mu) {
  const Eigen::VectorXd offset = mu_i - mu;
  const double energy = offset.squaredNorm();
  if (energy == 0.0) {
    throw Error(ErrorCode::DegenerateCentroid, "centroid coincides with the global mean");
  }
  const Subspace fourier = fourier_pair_subspace(static_cast<std::size_t>(mu.size()));
  return (fourier.basis().transpose() * offset).squaredNorm() / energy;
}

}  // namespace slidewin
