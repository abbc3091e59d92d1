#pragma once

#include "slidewin/series.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

namespace slidewin {

enum class Increment { Normal, Rademacher };

struct RandomWalkConfig {
  std::size_t m = 100;
  Increment increments = Increment::Normal;
  std::uint64_t seed = 0;
};

/// x(0) = 0 and x(t) = x(t-1) + Z_t with i.i.d. increments.
Timeseries gen_random_walk(const RandomWalkConfig& cfg);

struct NoisySineConfig {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  std::size_t p = 1;
  std::size_t w = 3;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  std::size_t length() const { return p * w + w - 1; }
};

struct NoisySine {
  Timeseries x;
  /// The exactly mean-zero noise component.
  Timeseries noise;
};

/// a + b sin(2 pi (t - c) / w) + e(t) of length pw + w - 1, where e is
/// Gaussian with the given sigma, recentred to mean zero.
NoisySine gen_noisy_sine(const NoisySineConfig& cfg);

/// The noiseless part a + b sin(2 pi (t - c) / w).
double noisy_sine_signal(const NoisySineConfig& cfg, std::size_t t);

enum class CbfClass { Cylinder, Bell, Funnel };

struct CbfConfig {
  CbfClass shape = CbfClass::Cylinder;
  std::size_t length = 128;
  std::uint64_t seed = 0;
};

/// Event window and amplitude drawn for one CBF sample (1-based times).
struct CbfDraw {
  Timeseries x;
  std::size_t onset = 0;
  std::size_t offset = 0;
  double amplitude = 0.0;
};

/// One cylinder, bell or funnel draw. With eta and eps(t) standard normal,
/// onset a uniform in [16, 32] and offset b = a + uniform [32, 96]:
///   cylinder (6 + eta) 1[a,b](t) + eps(t)
///   bell     (6 + eta) 1[a,b](t) (t - a) / (b - a) + eps(t)
///   funnel   (6 + eta) 1[a,b](t) (b - t) / (b - a) + eps(t)
/// for t = 1..length, stored at index t - 1.
CbfDraw gen_cbf_draw(const CbfConfig& cfg);
Timeseries gen_cbf(const CbfConfig& cfg);

/// `draws` CBF samples cycling cylinder, bell, funnel, concatenated. Draw i
/// uses seed derive_seed(seed, i).
Timeseries gen_cbf_concatenation(std::size_t draws, std::size_t length, std::uint64_t seed);

enum class Transform { None, Log };

/// Column chosen by header name or 0-based position.
using ColumnSelector = std::variant<std::string, std::size_t>;

/// Reads one column of a comma-separated file with a header row. Errors carry
/// the 1-based data row (the header is row 0).
Timeseries load_csv(const std::filesystem::path& path, const ColumnSelector& column,
                    Transform transform = Transform::None);

}  // namespace slidewin
