#include "slidewin/series.hpp"

#include "slidewin/error.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace slidewin {

Timeseries::Timeseries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "timeseries must have length >= 1");
  }
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (!std::isfinite(values_[t])) {
      throw Error(ErrorCode::InvalidArgument,
                  "timeseries value at t=" + std::to_string(t) + " is not finite");
    }
  }
}

Timeseries Timeseries::zero_padded(std::size_t count) const {
  std::vector<double> out(values_.size() + 2 * count, 0.0);
  std::copy(values_.begin(), values_.end(), out.begin() + static_cast<std::ptrdiff_t>(count));
  return Timeseries(std::move(out));
}

namespace {

WindowMatrix windows_of(std::span<const double> x, std::size_t w, bool padded) {
  const std::size_t n = x.size() - w + 1;
  WindowMatrix out;
  out.w = w;
  out.n = n;
  out.padded = padded;
  out.data.resize(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < w; ++t) {
      out.data(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) = x[s + t];
    }
  }
  return out;
}

}  // namespace

WindowMatrix sliding_windows(const Timeseries& x, std::size_t w) {
  if (w < 1 || w > x.size()) {
    throw Error(ErrorCode::InvalidWindowLength,
                "window length " + std::to_string(w) + " outside [1, " +
                    std::to_string(x.size()) + "]");
  }
  return windows_of(x.values(), w, false);
}

WindowMatrix zero_pad_windows(const Timeseries& x, std::size_t w) {
  if (w < 1) {
    throw Error(ErrorCode::InvalidWindowLength, "window length must be >= 1");
  }
  const Timeseries padded = x.zero_padded(w - 1);
  return windows_of(padded.values(), w, true);
}

double sup_norm(const Timeseries& x) {
  double best = 0.0;
  for (double v : x.values()) best = std::max(best, std::abs(v));
  return best;
}

double lipschitz_seminorm(std::span<const double> x) {
  if (x.size() < 2) {
    throw Error(ErrorCode::InsufficientLength,
                "Lipschitz seminorm needs at least 2 samples");
  }
  double best = 0.0;
  for (std::size_t t = 0; t + 1 < x.size(); ++t) {
    best = std::max(best, std::abs(x[t + 1] - x[t]));
  }
  return best;
}

double lipschitz_seminorm(const Timeseries& x) { return lipschitz_seminorm(x.values()); }

CenteredNorms centered_norms(const Timeseries& x) {
  const auto v = x.values();
  double sum = 0.0;
  for (double a : v) sum += a;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double a : v) ss += (a - mean) * (a - mean);
  return {mean, std::sqrt(ss)};
}

Spectrum dft_magnitudes(const Timeseries& x) {
  const std::size_t m = x.size();
  const auto v = x.values();

  // Twiddles indexed by (f*t mod m) keep the phase argument small.
  std::vector<std::complex<double>> twiddle(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    twiddle[j] = {std::cos(angle), std::sin(angle)};
  }

  Spectrum out;
  out.magnitudes.resize(m);
  for (std::size_t f = 0; f < m; ++f) {
    std::complex<double> acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t t = 0; t < m; ++t) {
      acc += v[t] * twiddle[idx];
      idx += f;
      if (idx >= m) idx -= m;
    }
    out.magnitudes[f] = std::abs(acc);
  }

  double best = -1.0;
  for (std::size_t f = 1; f <= m / 2; ++f) {
    if (out.magnitudes[f] > best) {
      best = out.magnitudes[f];
      out.dominant_frequency = f;
    }
  }
  if (out.dominant_frequency > 0) {
    out.dominant_period = static_cast<double>(m) / static_cast<double>(out.dominant_frequency);
  }
  return out;
}

}  // namespace slidewin
