#pragma once

#include "slidewin/cluster.hpp"
#include "slidewin/synth.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace slidewin {

/// Largest n accepted by the exhaustive routines unless overridden.
inline constexpr std::size_t kDefaultSizeGuard = 14;

/// Calls `visit` once for every partition of [n] into exactly k nonempty
/// blocks, each given as a restricted growth string. Returns the count.
/// Throws Error(SizeGuard) when n > max_n.
std::size_t enumerate_partitions(std::size_t n, int k,
                                 const std::function<void(const Partition&)>& visit,
                                 std::size_t max_n = kDefaultSizeGuard);

/// Stirling number of the second kind via S(n,k) = k S(n-1,k) + S(n-1,k-1).
std::uint64_t stirling2(std::size_t n, std::size_t k);

struct ExactKMeans {
  ClusteringResult best;
  /// Every partition (canonical form) attaining the optimum.
  std::vector<Partition> optimal;
  std::size_t enumerated = 0;
};

/// Globally optimal k-means partition by exhaustive enumeration.
ExactKMeans exact_kmeans(const Eigen::MatrixXd& points, int k,
                         std::size_t max_n = kDefaultSizeGuard);
ExactKMeans exact_kmeans(const WindowMatrix& X, int k, std::size_t max_n = kDefaultSizeGuard);

/// Maps an index gap |s - s'| to its contribution. The identity reproduces the
/// expected squared window distance divided by w; anything else is a test hook.
using GapKernel = std::function<double(std::size_t)>;

double identity_gap(std::size_t gap);

/// w * sum_i (1/|C_i|) sum_{s,s' in C_i} kernel(|s - s'|) over ordered pairs.
double expected_objective(std::size_t w, const Partition& P, const GapKernel& kernel = identity_gap);

struct ExpectedMinimizers {
  double minimum = 0.0;
  /// Canonical forms, in enumeration order.
  std::vector<Partition> minimizers;
  std::size_t enumerated = 0;
};

/// All minimizers of expected_objective over partitions of [n] into k blocks.
ExpectedMinimizers minimize_expected_objective(std::size_t n, std::size_t w, int k,
                                               const GapKernel& kernel = identity_gap,
                                               std::size_t max_n = kDefaultSizeGuard);

/// Interval partitions of [n] whose block sizes are floor(n/k) or ceil(n/k),
/// built directly from the block-size sequences (canonical forms).
std::vector<Partition> balanced_interval_partitions(std::size_t n, int k);

struct LemmaReport {
  std::size_t checked = 0;
  std::size_t equalities = 0;
  std::size_t inequality_violations = 0;
  /// Subsets where "equality iff interval" fails.
  std::size_t equality_violations = 0;
};

/// Checks sum_{s,s' in C} kernel(|s-s'|) >= r(r+1)(r-1)/3, with equality
/// exactly for intervals, over every nonempty C in [range_size] with
/// |C| <= max_subset_size. Guards: range_size <= 16, max_subset_size <= 6.
LemmaReport check_interval_lemma(std::size_t range_size, std::size_t max_subset_size,
                                 const GapKernel& kernel = identity_gap);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

/// Mean of ||x_s - x_s'||^2 over random walks, trial i seeded with
/// derive_seed(seed, i).
MonteCarloEstimate mc_expected_distance(std::size_t w, std::size_t s, std::size_t s_prime,
                                        std::size_t trials, std::uint64_t seed,
                                        Increment increments = Increment::Normal);

}  // namespace slidewin
