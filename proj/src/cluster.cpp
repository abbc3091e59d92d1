#include "slidewin/cluster.hpp"

#include "slidewin/error.hpp"
#include "slidewin/linalg.hpp"
#include "slidewin/random.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <string>
#include <thread>

namespace slidewin {

Partition::Partition(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
  if (k_ < 1) throw Error(ErrorCode::InvalidK, "partition needs k >= 1");
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k_), 0);
  for (int label : labels_) {
    if (label < 0 || label >= k_) {
      throw Error(ErrorCode::InvalidArgument,
                  "label " + std::to_string(label) + " outside [0, " + std::to_string(k_) + ")");
    }
    ++sizes[static_cast<std::size_t>(label)];
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) {
      throw Error(ErrorCode::InvalidArgument, "cluster " + std::to_string(i) + " is empty");
    }
  }
}

std::vector<std::vector<std::size_t>> Partition::clusters() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k_));
  for (std::size_t s = 0; s < labels_.size(); ++s) {
    out[static_cast<std::size_t>(labels_[s])].push_back(s);
  }
  return out;
}

Partition Partition::canonical() const {
  std::vector<int> remap(static_cast<std::size_t>(k_), -1);
  std::vector<int> out(labels_.size());
  int next = 0;
  for (std::size_t s = 0; s < labels_.size(); ++s) {
    int& target = remap[static_cast<std::size_t>(labels_[s])];
    if (target < 0) target = next++;
    out[s] = target;
  }
  return Partition(std::move(out), k_);
}

namespace {

using Index = Eigen::Index;

struct Run {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& points, int k, RandomEngine& rng) {
  const Index n = points.cols();
  Eigen::MatrixXd centers(points.rows(), k);
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);

  std::uniform_int_distribution<Index> pick(0, n - 1);
  Index first = pick(rng);
  centers.col(0) = points.col(first);
  chosen[static_cast<std::size_t>(first)] = true;

  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Index s = 0; s < n; ++s) {
    d2[static_cast<std::size_t>(s)] = (points.col(s) - centers.col(0)).squaredNorm();
  }

  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;

    Index next = -1;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      const double target = u(rng);
      double acc = 0.0;
      for (Index s = 0; s < n; ++s) {
        acc += d2[static_cast<std::size_t>(s)];
        if (acc >= target && d2[static_cast<std::size_t>(s)] > 0.0) {
          next = s;
          break;
        }
      }
      if (next < 0) {
        // Roundoff in the cumulative sum: take the last point with mass.
        for (Index s = n - 1; s >= 0; --s) {
          if (d2[static_cast<std::size_t>(s)] > 0.0) {
            next = s;
            break;
          }
        }
      }
    } else {
      // Every remaining point coincides with a centre; pick an unused index.
      std::vector<Index> unused;
      for (Index s = 0; s < n; ++s) {
        if (!chosen[static_cast<std::size_t>(s)]) unused.push_back(s);
      }
      std::uniform_int_distribution<std::size_t> pick_unused(0, unused.size() - 1);
      next = unused[pick_unused(rng)];
    }

    chosen[static_cast<std::size_t>(next)] = true;
    centers.col(c) = points.col(next);
    for (Index s = 0; s < n; ++s) {
      d2[static_cast<std::size_t>(s)] =
          std::min(d2[static_cast<std::size_t>(s)], (points.col(s) - centers.col(c)).squaredNorm());
    }
  }
  return centers;
}

Run lloyd(const Eigen::MatrixXd& points, int k, const KMeansConfig& cfg, RandomEngine& rng) {
  const Index n = points.cols();
  const auto nk = static_cast<std::size_t>(k);
  Run run;
  run.centroids = seed_plus_plus(points, k, rng);
  run.labels.assign(static_cast<std::size_t>(n), 0);

  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<std::size_t> sizes(nk);

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    std::fill(sizes.begin(), sizes.end(), 0);
    for (Index s = 0; s < n; ++s) {
      double best = std::numeric_limits<double>::infinity();
      int best_j = 0;
      for (int j = 0; j < k; ++j) {
        const double d = (points.col(s) - run.centroids.col(j)).squaredNorm();
        if (d < best) {
          best = d;
          best_j = j;
        }
      }
      run.labels[static_cast<std::size_t>(s)] = best_j;
      dist[static_cast<std::size_t>(s)] = best;
      ++sizes[static_cast<std::size_t>(best_j)];
    }

    // Empty cluster: move in the point farthest from its centroid, drawn from
    // clusters that can spare one.
    for (int j = 0; j < k; ++j) {
      if (sizes[static_cast<std::size_t>(j)] != 0) continue;
      Index far = -1;
      double far_d = -1.0;
      for (Index s = 0; s < n; ++s) {
        const auto from = static_cast<std::size_t>(run.labels[static_cast<std::size_t>(s)]);
        if (sizes[from] > 1 && dist[static_cast<std::size_t>(s)] > far_d) {
          far_d = dist[static_cast<std::size_t>(s)];
          far = s;
        }
      }
      const auto from = static_cast<std::size_t>(run.labels[static_cast<std::size_t>(far)]);
      --sizes[from];
      ++sizes[static_cast<std::size_t>(j)];
      run.labels[static_cast<std::size_t>(far)] = j;
      dist[static_cast<std::size_t>(far)] = 0.0;
      run.centroids.col(j) = points.col(far);
    }

    Eigen::MatrixXd updated = Eigen::MatrixXd::Zero(points.rows(), k);
    for (Index s = 0; s < n; ++s) updated.col(run.labels[static_cast<std::size_t>(s)]) += points.col(s);
    for (int j = 0; j < k; ++j) updated.col(j) /= static_cast<double>(sizes[static_cast<std::size_t>(j)]);

    double movement = 0.0;
    for (int j = 0; j < k; ++j) {
      movement = std::max(movement, (updated.col(j) - run.centroids.col(j)).norm());
    }
    run.centroids = std::move(updated);

    double sse = 0.0;
    for (Index s = 0; s < n; ++s) {
      sse += (points.col(s) - run.centroids.col(run.labels[static_cast<std::size_t>(s)])).squaredNorm();
    }
    run.sse = sse;
    run.trace.push_back(sse);
    run.iterations = iter;
    if (movement < cfg.tol) {
      run.converged = true;
      break;
    }
  }
  return run;
}

void validate_k(Index n, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidK, "k must be >= 1, got " + std::to_string(k));
  if (static_cast<Index>(k) > n) {
    throw Error(ErrorCode::Infeasible,
                "k = " + std::to_string(k) + " exceeds point count " + std::to_string(n));
  }
}

}  // namespace

ClusteringResult kmeans(const Eigen::MatrixXd& points, int k, const KMeansConfig& cfg) {
  validate_k(points.cols(), k);
  const int restarts = std::max(1, cfg.restarts);
  std::vector<Run> runs(static_cast<std::size_t>(restarts));

  auto work = [&](int r) {
    RandomEngine rng = make_engine(cfg.seed, static_cast<std::uint64_t>(r));
    runs[static_cast<std::size_t>(r)] = lloyd(points, k, cfg, rng);
  };

  const int threads = std::clamp(cfg.threads, 1, restarts);
  if (threads == 1) {
    for (int r = 0; r < restarts; ++r) work(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int r = next++; r < restarts; r = next++) work(r);
      });
    }
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].sse < runs[best].sse) best = r;
  }
  Run& win = runs[best];
  return ClusteringResult{
      .partition = Partition(std::move(win.labels), k),
      .centroids = std::move(win.centroids),
      .sse = win.sse,
      .restarts_used = restarts,
      .iterations = win.iterations,
      .converged = win.converged,
      .sse_trace = std::move(win.trace),
  };
}

ClusteringResult kmeans(const WindowMatrix& X, int k, const KMeansConfig& cfg) {
  return kmeans(X.data, k, cfg);
}

ClusteringResult spectral_kmeans(const Eigen::MatrixXd& points, int k, const KMeansConfig& cfg) {
  validate_k(points.cols(), k);
  const Eigen::VectorXd mu = points.rowwise().mean();
  const Eigen::MatrixXd centred = points.colwise() - mu;

  const Svd svd = jacobi_svd(centred);
  const Index rank = numerical_rank(svd.values);
  const Index want = k - 1;
  const Index r = std::min(want, rank);

  const Eigen::MatrixXd basis = svd.U.leftCols(r);
  const Eigen::MatrixXd coords = basis.transpose() * centred;

  ClusteringResult result = kmeans(coords, k, cfg);
  result.centroids = (basis * result.centroids).colwise() + mu;
  result.sse = sse_against(points, result.partition, result.centroids);
  result.rank_deficient = r < want;
  result.projection_rank = static_cast<int>(r);
  return result;
}

ClusteringResult spectral_kmeans(const WindowMatrix& X, int k, const KMeansConfig& cfg) {
  return spectral_kmeans(X.data, k, cfg);
}

Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& points, const Partition& P) {
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(points.rows(), P.k());
  std::vector<double> sizes(static_cast<std::size_t>(P.k()), 0.0);
  for (std::size_t s = 0; s < P.size(); ++s) {
    means.col(P.label(s)) += points.col(static_cast<Index>(s));
    sizes[static_cast<std::size_t>(P.label(s))] += 1.0;
  }
  for (int j = 0; j < P.k(); ++j) means.col(j) /= sizes[static_cast<std::size_t>(j)];
  return means;
}

double sse_against(const Eigen::MatrixXd& points, const Partition& P,
                   const Eigen::MatrixXd& centroids) {
  double sse = 0.0;
  for (std::size_t s = 0; s < P.size(); ++s) {
    sse += (points.col(static_cast<Index>(s)) - centroids.col(P.label(s))).squaredNorm();
  }
  return sse;
}

double centroid_sse(const Eigen::MatrixXd& points, const Partition& P) {
  return sse_against(points, P, cluster_means(points, P));
}

double pairwise_objective(const Eigen::MatrixXd& points, const Partition& P) {
  if (P.size() != static_cast<std::size_t>(points.cols())) {
    throw Error(ErrorCode::InvalidArgument, "partition size does not match column count");
  }
  double total = 0.0;
  for (const auto& members : P.clusters()) {
    double within = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        within += (points.col(static_cast<Index>(members[a])) -
                   points.col(static_cast<Index>(members[b])))
                      .squaredNorm();
      }
    }
    // Each unordered pair appears twice among ordered pairs.
    total += 2.0 * within / static_cast<double>(members.size());
  }
  return total;
}

double pairwise_objective(const WindowMatrix& X, const Partition& P) {
  return pairwise_objective(X.data, P);
}

bool is_interval_partition(const Partition& P) {
  for (const auto& members : P.clusters()) {
    if (members.back() - members.front() + 1 != members.size()) return false;
  }
  return true;
}

}  // namespace slidewin
