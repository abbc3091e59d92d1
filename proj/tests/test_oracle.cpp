#include "slidewin/error.hpp"
#include "slidewin/oracle.hpp"
#include "slidewin/random.hpp"

#include <doctest.h>

#include <set>

using namespace slidewin;

namespace {

// Independent Stirling recurrence over a full table.
std::uint64_t stirling_table(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::uint64_t>> S(n + 1, std::vector<std::uint64_t>(k + 1, 0));
  S[0][0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= std::min(i, k); ++j) S[i][j] = j * S[i - 1][j] + S[i - 1][j - 1];
  }
  return S[n][k];
}

// Best 1-D k-means cost using only value-contiguous clusters of sorted data.
double sorted_split_optimum(std::vector<double> v, int k) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  auto cost = [&](std::size_t a, std::size_t b) {
    double mean = 0.0;
    for (std::size_t i = a; i < b; ++i) mean += v[i];
    mean /= double(b - a);
    double c = 0.0;
    for (std::size_t i = a; i < b; ++i) c += (v[i] - mean) * (v[i] - mean);
    return c;
  };
  double best = INFINITY;
  if (k == 2) {
    for (std::size_t c = 1; c < n; ++c) best = std::min(best, cost(0, c) + cost(c, n));
  } else if (k == 3) {
    for (std::size_t c1 = 1; c1 < n; ++c1)
      for (std::size_t c2 = c1 + 1; c2 < n; ++c2)
        best = std::min(best, cost(0, c1) + cost(c1, c2) + cost(c2, n));
  }
  return best;
}

double direct_gap_objective(const std::vector<std::vector<std::size_t>>& clusters, double w) {
  double total = 0.0;
  for (const auto& c : clusters) {
    double s = 0.0;
    for (std::size_t a : c)
      for (std::size_t b : c) s += a > b ? double(a - b) : double(b - a);
    total += s / double(c.size());
  }
  return w * total;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("partition counts are Stirling numbers without duplicates") {
  CHECK(enumerate_partitions(3, 2, [](const Partition&) {}) == 3);
  CHECK(enumerate_partitions(4, 2, [](const Partition&) {}) == 7);
  CHECK(stirling_table(10, 3) == 9330);

  for (std::size_t n = 1; n <= 9; ++n) {
    for (int k = 1; k <= static_cast<int>(n); ++k) {
      std::set<std::vector<int>> seen;
      const std::size_t count = enumerate_partitions(n, k, [&](const Partition& P) {
        CHECK(P.canonical().labels() == P.labels());
        seen.insert(P.labels());
      });
      CHECK(count == stirling_table(n, std::size_t(k)));
      CHECK(seen.size() == count);
      CHECK(stirling2(n, std::size_t(k)) == count);
    }
  }
  CHECK(enumerate_partitions(10, 3, [](const Partition&) {}) == 9330);
}

TEST_CASE("size guard") {
  try {
    enumerate_partitions(15, 2, [](const Partition&) {});
    FAIL("expected size guard");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeGuard);
    CHECK(e.kind() == ErrorKind::SizeGuard);
  }
  CHECK_THROWS_AS(exact_kmeans(Eigen::MatrixXd::Zero(1, 15), 2), Error);
  CHECK_THROWS_AS(check_interval_lemma(17, 3), Error);
  CHECK_THROWS_AS(check_interval_lemma(16, 7), Error);
}

TEST_CASE("exact kmeans") {
  Eigen::MatrixXd X(1, 4);
  X << 3, -1, 8, 2;
  CHECK(exact_kmeans(X, 4).best.sse == 0.0);

  Eigen::MatrixXd dup(2, 6);
  dup << 1, 4, 1, 4, 7, 7,
         0, 0, 0, 0, 1, 1;
  const ExactKMeans e = exact_kmeans(dup, 3);
  CHECK(e.best.sse == 0.0);
  CHECK(e.optimal.size() == 1);
  CHECK(e.best.partition.labels() == std::vector<int>{0, 1, 0, 1, 2, 2});

  // Ties: four equidistant points on a square split two ways.
  Eigen::MatrixXd square(2, 4);
  square << 0, 1, 0, 1,
            0, 0, 1, 1;
  CHECK(exact_kmeans(square, 2).optimal.size() == 2);
}

TEST_CASE("exact kmeans agrees with the 1-D sorted-split oracle") {
  RandomEngine rng = make_engine(12);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> v(8);
    for (double& a : v) a = normal(rng);
    Eigen::MatrixXd X(1, 8);
    for (int i = 0; i < 8; ++i) X(0, i) = v[std::size_t(i)];
    for (int k : {2, 3}) {
      CHECK(exact_kmeans(X, k).best.sse == doctest::Approx(sorted_split_optimum(v, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("expected objective") {
  CHECK(expected_objective(1, Partition({0, 0, 0}, 1)) == doctest::Approx(8.0 / 3.0));
  CHECK(expected_objective(5, Partition({0, 1, 2}, 3)) == 0.0);
  const Partition balanced({0, 0, 0, 0, 1, 1, 1, 2, 2, 2}, 3);
  CHECK(expected_objective(1, balanced) == doctest::Approx(31.0 / 3.0));
  CHECK(direct_gap_objective(balanced.clusters(), 1.0) == doctest::Approx(31.0 / 3.0));

  RandomEngine rng = make_engine(13);
  std::uniform_int_distribution<int> label(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> labels(11);
    for (std::size_t s = 0; s < labels.size(); ++s) labels[s] = s < 4 ? int(s) : label(rng);
    const Partition P(labels, 4);
    CHECK(expected_objective(3, P) == doctest::Approx(direct_gap_objective(P.clusters(), 3.0)));
  }
}

TEST_CASE("expected objective minimizers are balanced intervals") {
  const ExpectedMinimizers six = minimize_expected_objective(6, 1, 3);
  REQUIRE(six.minimizers.size() == 1);
  CHECK(six.minimizers[0].labels() == std::vector<int>{0, 0, 1, 1, 2, 2});

  const ExpectedMinimizers ten = minimize_expected_objective(10, 1, 3);
  CHECK(ten.enumerated == 9330);
  CHECK(ten.minimizers.size() == 3);
  CHECK(ten.minimum == doctest::Approx(31.0 / 3.0));
  std::set<std::vector<int>> found;
  for (const auto& P : ten.minimizers) {
    CHECK(is_interval_partition(P));
    found.insert(P.labels());
  }
  std::set<std::vector<int>> expected;
  for (const auto& P : balanced_interval_partitions(10, 3)) expected.insert(P.labels());
  CHECK(found == expected);

  const ExpectedMinimizers scaled = minimize_expected_objective(10, 7, 3);
  CHECK(scaled.minimum == doctest::Approx(7.0 * 31.0 / 3.0));
  REQUIRE(scaled.minimizers.size() == ten.minimizers.size());
  for (std::size_t i = 0; i < scaled.minimizers.size(); ++i) CHECK(scaled.minimizers[i] == ten.minimizers[i]);
}

TEST_CASE("interval lemma") {
  const LemmaReport r = check_interval_lemma(16, 6);
  CHECK(r.checked == 16 + 120 + 560 + 1820 + 4368 + 8008);
  CHECK(r.inequality_violations == 0);
  CHECK(r.equality_violations == 0);
  // Intervals of size r in [16]: 16 - r + 1.
  CHECK(r.equalities == 16 + 15 + 14 + 13 + 12 + 11);

  const LemmaReport tampered = check_interval_lemma(8, 4, [](std::size_t g) { return std::pow(double(g), 1.5); });
  CHECK(tampered.equality_violations > 0);
}

TEST_CASE("monte carlo window distance") {
  const MonteCarloEstimate same = mc_expected_distance(4, 3, 3, 100, 1);
  CHECK(same.estimate == 0.0);

  const MonteCarloEstimate a = mc_expected_distance(3, 2, 0, 10000, 2);
  CHECK(std::abs(a.estimate - 6.0) <= 4.0 * a.standard_error);
  const MonteCarloEstimate b = mc_expected_distance(5, 1, 2, 10000, 3);
  CHECK(std::abs(b.estimate - 5.0) <= 4.0 * b.standard_error);
}

}
