#include "slidewin/oracle.hpp"

#include "slidewin/error.hpp"
#include "slidewin/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace slidewin {

namespace {

void guard(std::size_t n, std::size_t max_n) {
  if (n > max_n) {
    throw Error(ErrorCode::SizeGuard, "exhaustive enumeration limited to n <= " +
                                          std::to_string(max_n) + ", got n = " + std::to_string(n));
  }
}

struct RgsWalker {
  std::size_t n;
  int k;
  const std::function<void(const Partition&)>& visit;
  std::vector<int> labels;
  std::size_t count = 0;

  // `used` blocks appear in labels[0..i).
  void extend(std::size_t i, int used) {
    if (i == n) {
      if (used == k) {
        visit(Partition(labels, k));
        ++count;
      }
      return;
    }
    const auto remaining_after = static_cast<int>(n - i - 1);
    for (int label = 0; label < used; ++label) {
      if (used + remaining_after < k) break;
      labels[i] = label;
      extend(i + 1, used);
    }
    if (used < k) {
      labels[i] = used;
      extend(i + 1, used + 1);
    }
  }
};

std::uint64_t lcm_upto(std::size_t n) {
  std::uint64_t l = 1;
  for (std::uint64_t i = 2; i <= n; ++i) l = std::lcm(l, i);
  return l;
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::size_t enumerate_partitions(std::size_t n, int k,
                                 const std::function<void(const Partition&)>& visit,
                                 std::size_t max_n) {
  guard(n, max_n);
  if (k < 1) throw Error(ErrorCode::InvalidK, "k must be >= 1");
  if (n < 1 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::Infeasible, "need 1 <= k <= n for a partition into k blocks");
  }
  RgsWalker walker{n, k, visit, std::vector<int>(n, 0)};
  walker.extend(1, 1);
  return walker.count;
}

std::uint64_t stirling2(std::size_t n, std::size_t k) {
  std::vector<std::uint64_t> row(k + 1, 0);
  row[0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = std::min(i, k); j >= 1; --j) row[j] = j * row[j] + row[j - 1];
    row[0] = 0;
  }
  return row[k];
}

ExactKMeans exact_kmeans(const Eigen::MatrixXd& points, int k, std::size_t max_n) {
  const auto n = static_cast<std::size_t>(points.cols());
  guard(n, max_n);

  Eigen::MatrixXd d2(points.cols(), points.cols());
  for (Eigen::Index a = 0; a < points.cols(); ++a) {
    for (Eigen::Index b = 0; b < points.cols(); ++b) {
      d2(a, b) = (points.col(a) - points.col(b)).squaredNorm();
    }
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<Partition> optimal;
  std::vector<double> within(static_cast<std::size_t>(std::max(k, 1)));
  std::vector<double> sizes(within.size());

  auto visit = [&](const Partition& P) {
    std::fill(within.begin(), within.end(), 0.0);
    std::fill(sizes.begin(), sizes.end(), 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      const auto la = static_cast<std::size_t>(P.label(a));
      sizes[la] += 1.0;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (P.label(b) == P.label(a)) within[la] += d2(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
    double objective = 0.0;
    for (std::size_t i = 0; i < within.size(); ++i) objective += 2.0 * within[i] / sizes[i];

    const double tol = 1e-9 * std::max(1.0, std::abs(best));
    if (optimal.empty() || objective < best - tol) {
      best = objective;
      optimal.clear();
      optimal.push_back(P);
    } else if (objective <= best + tol) {
      optimal.push_back(P);
    }
  };
  const std::size_t count = enumerate_partitions(n, k, visit, max_n);

  const Partition& winner = optimal.front();
  ExactKMeans out{
      ClusteringResult{
          .partition = winner,
          .centroids = cluster_means(points, winner),
          .sse = centroid_sse(points, winner),
          .restarts_used = 0,
          .iterations = 0,
          .converged = true,
          .sse_trace = {},
      },
      std::move(optimal), count};
  return out;
}

ExactKMeans exact_kmeans(const WindowMatrix& X, int k, std::size_t max_n) {
  return exact_kmeans(X.data, k, max_n);
}

double identity_gap(std::size_t gap) { return static_cast<double>(gap); }

namespace {

// sum_{s,s' in C} kernel(|s - s'|) over ordered pairs; members ascending.
double gap_sum(const std::vector<std::size_t>& members, const GapKernel& kernel) {
  double total = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) total += kernel(members[b] - members[a]);
  }
  return 2.0 * total;
}

}  // namespace

double expected_objective(std::size_t w, const Partition& P, const GapKernel& kernel) {
  double total = 0.0;
  for (const auto& members : P.clusters()) {
    total += gap_sum(members, kernel) / static_cast<double>(members.size());
  }
  return static_cast<double>(w) * total;
}

ExpectedMinimizers minimize_expected_objective(std::size_t n, std::size_t w, int k,
                                               const GapKernel& kernel, std::size_t max_n) {
  guard(n, max_n);
  // Scaling every cluster term by lcm(1..n) keeps integer-valued kernels exact.
  const double scale = static_cast<double>(lcm_upto(n));
  double best = std::numeric_limits<double>::infinity();
  std::vector<Partition> minimizers;

  auto visit = [&](const Partition& P) {
    double scaled = 0.0;
    for (const auto& members : P.clusters()) {
      scaled += gap_sum(members, kernel) * (scale / static_cast<double>(members.size()));
    }
    if (minimizers.empty() || (scaled < best && !nearly_equal(scaled, best))) {
      best = scaled;
      minimizers.clear();
      minimizers.push_back(P);
    } else if (nearly_equal(scaled, best)) {
      minimizers.push_back(P);
    }
  };
  ExpectedMinimizers out;
  out.enumerated = enumerate_partitions(n, k, visit, max_n);
  out.minimum = static_cast<double>(w) * best / scale;
  out.minimizers = std::move(minimizers);
  return out;
}

std::vector<Partition> balanced_interval_partitions(std::size_t n, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::Infeasible, "need 1 <= k <= n");
  }
  const auto kk = static_cast<std::size_t>(k);
  const std::size_t small = n / kk;
  const std::size_t big_blocks = n % kk;

  std::vector<Partition> out;
  // Choose which of the k consecutive blocks receive the extra element.
  std::vector<bool> is_big(kk, false);
  std::fill(is_big.begin(), is_big.begin() + static_cast<std::ptrdiff_t>(big_blocks), true);
  std::sort(is_big.begin(), is_big.end());
  do {
    std::vector<int> labels;
    labels.reserve(n);
    for (std::size_t block = 0; block < kk; ++block) {
      const std::size_t len = small + (is_big[block] ? 1 : 0);
      labels.insert(labels.end(), len, static_cast<int>(block));
    }
    out.emplace_back(std::move(labels), k);
  } while (std::next_permutation(is_big.begin(), is_big.end()));
  return out;
}

LemmaReport check_interval_lemma(std::size_t range_size, std::size_t max_subset_size,
                                 const GapKernel& kernel) {
  if (range_size > 16 || max_subset_size > 6) {
    throw Error(ErrorCode::SizeGuard,
                "interval lemma check limited to range_size <= 16 and subset size <= 6");
  }
  LemmaReport report;
  const std::uint32_t limit = std::uint32_t{1} << range_size;
  std::vector<std::size_t> members;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    const auto r = static_cast<std::size_t>(std::popcount(mask));
    if (r > max_subset_size) continue;
    members.clear();
    for (std::size_t s = 0; s < range_size; ++s) {
      if (mask & (std::uint32_t{1} << s)) members.push_back(s);
    }
    const double sum = gap_sum(members, kernel);
    const double rd = static_cast<double>(r);
    const double bound = rd * (rd + 1.0) * (rd - 1.0) / 3.0;
    const bool interval = members.back() - members.front() + 1 == r;
    const bool equal = std::abs(sum - bound) <= 1e-9 * std::max(1.0, bound);

    ++report.checked;
    if (equal) ++report.equalities;
    if (sum < bound && !equal) ++report.inequality_violations;
    if (equal != interval) ++report.equality_violations;
  }
  return report;
}

MonteCarloEstimate mc_expected_distance(std::size_t w, std::size_t s, std::size_t s_prime,
                                        std::size_t trials, std::uint64_t seed,
                                        Increment increments) {
  if (w < 1 || trials < 1) {
    throw Error(ErrorCode::InvalidArgument, "need w >= 1 and trials >= 1");
  }
  const std::size_t m = std::max(s, s_prime) + w;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    const Timeseries x = gen_random_walk({m, increments, derive_seed(seed, i)});
    double d = 0.0;
    for (std::size_t t = 0; t < w; ++t) {
      const double diff = x[s + t] - x[s_prime + t];
      d += diff * diff;
    }
    // Welford update.
    const double delta = d - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (d - mean);
  }
  MonteCarloEstimate out;
  out.trials = trials;
  out.estimate = mean;
  if (trials > 1) {
    const double variance = m2 / static_cast<double>(trials - 1);
    out.standard_error = std::sqrt(variance / static_cast<double>(trials));
  }
  return out;
}

}  // namespace slidewin
