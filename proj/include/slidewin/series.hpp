#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace slidewin {

/// A finite, 0-indexed real sequence x(0), ..., x(m-1) with m >= 1.
class Timeseries {
 public:
  /// Throws Error(InvalidArgument) on empty input or non-finite values.
  explicit Timeseries(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t t) const { return values_[t]; }
  std::span<const double> values() const noexcept { return values_; }

  /// The series with `count` zeros appended to both ends.
  Timeseries zero_padded(std::size_t count) const;

  bool operator==(const Timeseries&) const = default;

 private:
  std::vector<double> values_;
};

/// Windows of a series stored as the columns of a w x n matrix.
struct WindowMatrix {
  Eigen::MatrixXd data;
  std::size_t w = 0;
  std::size_t n = 0;
  bool padded = false;

  auto window(std::size_t s) const { return data.col(static_cast<Eigen::Index>(s)); }
};

/// Column s is [x(s), ..., x(s+w-1)], s in [m-w+1]. Requires 1 <= w <= m.
WindowMatrix sliding_windows(const Timeseries& x, std::size_t w);

/// Windows of the (w-1)-zero-padding of x; n = m + w - 1. Requires w >= 1.
WindowMatrix zero_pad_windows(const Timeseries& x, std::size_t w);

double sup_norm(const Timeseries& x);

/// max_t |x(t+1) - x(t)|; requires m >= 2.
double lipschitz_seminorm(const Timeseries& x);
double lipschitz_seminorm(std::span<const double> x);

struct CenteredNorms {
  double mean = 0.0;
  double centered_l2 = 0.0;
};

CenteredNorms centered_norms(const Timeseries& x);

struct Spectrum {
  /// |X(f)| for f in [m].
  std::vector<double> magnitudes;
  /// Nonzero frequency in [1, m/2] with the largest magnitude (0 if m == 1).
  std::size_t dominant_frequency = 0;
  /// m / dominant_frequency (0 if m == 1).
  double dominant_period = 0.0;
};

/// Direct O(m^2) discrete Fourier transform magnitudes.
Spectrum dft_magnitudes(const Timeseries& x);

}  // namespace slidewin
