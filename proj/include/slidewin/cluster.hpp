#pragma once

#include "slidewin/series.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace slidewin {

/// Assignment of indices [n] to k nonempty clusters labelled 0..k-1.
class Partition {
 public:
  /// Throws Error(InvalidArgument) if a label is outside [k] or a cluster is empty.
  Partition(std::vector<int> labels, int k);

  int k() const noexcept { return k_; }
  std::size_t size() const noexcept { return labels_.size(); }
  int label(std::size_t s) const { return labels_[s]; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  /// Members of each cluster in increasing order.
  std::vector<std::vector<std::size_t>> clusters() const;

  /// Relabelled so that labels appear in order of first occurrence
  /// (a restricted growth string). Equal for partitions with the same blocks.
  Partition canonical() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> labels_;
  int k_;
};

struct KMeansConfig {
  int restarts = 10;
  int max_iters = 300;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  /// Worker threads used for restarts; results do not depend on this.
  int threads = 1;
};

struct ClusteringResult {
  Partition partition;
  /// w x k, column i is the centroid of cluster i.
  Eigen::MatrixXd centroids;
  double sse = 0.0;
  int restarts_used = 0;
  int iterations = 0;
  bool converged = false;
  /// SSE after each Lloyd iteration of the winning restart.
  std::vector<double> sse_trace;
  /// Spectral only: fewer than k-1 nonzero singular values were available.
  bool rank_deficient = false;
  /// Spectral only: number of principal directions used.
  int projection_rank = 0;
};

/// Best-of-restarts Lloyd iteration with k-means++ seeding on the columns of
/// `points`. Requires 1 <= k <= points.cols().
ClusteringResult kmeans(const Eigen::MatrixXd& points, int k, const KMeansConfig& cfg = {});
ClusteringResult kmeans(const WindowMatrix& X, int k, const KMeansConfig& cfg = {});

/// Projects the centred columns onto their top k-1 principal directions, runs
/// kmeans there and maps centroids back into the original coordinates. The
/// reported sse is that of the original columns against those centroids.
ClusteringResult spectral_kmeans(const Eigen::MatrixXd& points, int k,
                                 const KMeansConfig& cfg = {});
ClusteringResult spectral_kmeans(const WindowMatrix& X, int k, const KMeansConfig& cfg = {});

/// Per-cluster column means (w x k).
Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& points, const Partition& P);

/// Sum over clusters of squared distances to the cluster mean.
double centroid_sse(const Eigen::MatrixXd& points, const Partition& P);

/// Sum over clusters of squared distances to the given centroids.
double sse_against(const Eigen::MatrixXd& points, const Partition& P,
                   const Eigen::MatrixXd& centroids);

/// sum_i (1/|C_i|) sum_{s,s' in C_i} ||x_s - x_s'||^2 over ordered pairs.
double pairwise_objective(const Eigen::MatrixXd& points, const Partition& P);
double pairwise_objective(const WindowMatrix& X, const Partition& P);

/// True iff every cluster is a run of consecutive indices.
bool is_interval_partition(const Partition& P);

}  // namespace slidewin
