#include "slidewin/cluster.hpp"
#include "slidewin/diagnostics.hpp"
#include "slidewin/error.hpp"
#include "slidewin/random.hpp"
#include "slidewin/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace slidewin;

namespace {

Subspace random_subspace(Eigen::Index d, Eigen::Index r, RandomEngine& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd M(d, r);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = normal(rng);
  return Subspace::span_of(M);
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("flatness ratio") {
  CHECK(flatness_ratio(Eigen::VectorXd::Constant(5, 3.0), Eigen::VectorXd::Zero(5)) == doctest::Approx(0.0));
  CHECK(flatness_ratio(Eigen::Vector2d(1, 0), Eigen::Vector2d::Zero()) == doctest::Approx(0.5));
  CHECK_THROWS_AS(flatness_ratio(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 1)), Error);

  RandomEngine rng = make_engine(1);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a(i) = normal(rng);
      b(i) = normal(rng);
    }
    // With mu constant the ratio is a projection ratio, hence in [0, 1].
    const Eigen::VectorXd mu = Eigen::VectorXd::Constant(6, b(0));
    const double ratio = flatness_ratio(a, mu);
    CHECK(ratio >= 0.0);
    CHECK(ratio <= 1.0 + 1e-12);
  }
}

TEST_CASE("flatness bound by substitution") {
  const BoundReport r = flatness_bound(Timeseries({0, 1}), 1);
  CHECK(r.rhs == doctest::Approx(20.0));
  CHECK(r.components.at("sup_norm") == 1.0);
  CHECK(r.components.at("lipschitz") == 1.0);
  try {
    flatness_bound(Timeseries({2, 2, 2}), 3);
    FAIL("expected degenerate denominator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateDenominator);
  }
}

TEST_CASE("flatness bound scales like w^3/m for random walks") {
  const std::size_t m = 4096, w = 4;
  std::vector<double> scaled;
  for (std::uint64_t seed = 0; seed < 21; ++seed) {
    const Timeseries x = gen_random_walk({m, Increment::Rademacher, seed});
    scaled.push_back(flatness_bound(x, w).rhs / (std::pow(double(w), 3) / double(m)));
  }
  std::nth_element(scaled.begin(), scaled.begin() + 10, scaled.end());
  CHECK(scaled[10] > 1.0);
  CHECK(scaled[10] < 100.0);
}

TEST_CASE("flatness bound for a slow sine scales like w^2/m + w^3/p") {
  const std::size_t m = 4096, p = 256, w = 4;
  std::vector<double> v(m);
  for (std::size_t t = 0; t < m; ++t) v[t] = std::sin(2 * std::numbers::pi * double(t) / double(p));
  const double order = double(w * w) / double(m) + std::pow(double(w), 3) / double(p);
  const double ratio = flatness_bound(Timeseries(v), w).rhs / order;
  CHECK(ratio > 0.1);
  CHECK(ratio < 10.0);
}

TEST_CASE("chordal distance examples") {
  const Subspace e1 = Subspace::span_of(Eigen::Vector2d(1, 0));
  const Subspace e2 = Subspace::span_of(Eigen::Vector2d(0, 1));
  const Subspace diag = Subspace::span_of(Eigen::Vector2d(1, 1));
  CHECK(chordal_distance(e1, e1) == doctest::Approx(0.0));
  CHECK(chordal_distance(e1, e2) == doctest::Approx(1.0));
  CHECK(chordal_distance(e1, diag) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(chordal_distance(e1, Subspace::span_of(Eigen::Matrix2d::Identity())), Error);
}

TEST_CASE("chordal distance behaves as a metric") {
  RandomEngine rng = make_engine(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Subspace a = random_subspace(7, 3, rng);
    const Subspace b = random_subspace(7, 3, rng);
    const Subspace c = random_subspace(7, 3, rng);
    CHECK(std::abs(chordal_distance(a, b) - chordal_distance(b, a)) <= 1e-10);
    CHECK(chordal_distance(a, c) <= chordal_distance(a, b) + chordal_distance(b, c) + 1e-10);
    // Same column space, different basis.
    const Subspace a2 = Subspace::span_of(a.basis() * Eigen::Matrix3d::Random().eval() +
                                          a.basis() * 4.0 * Eigen::Matrix3d::Identity());
    CHECK(chordal_distance(a, a2) <= 1e-7);
  }
}

TEST_CASE("fourier pair subspace") {
  const Subspace f = fourier_pair_subspace(4);
  Eigen::MatrixXd expected(4, 2);
  expected << 1, 0,
              0, 1,
             -1, 0,
              0, -1;
  expected /= std::sqrt(2.0);
  CHECK((f.basis() - expected).cwiseAbs().maxCoeff() < 1e-12);
  for (std::size_t w : {3u, 5u, 32u, 128u}) {
    const Subspace g = fourier_pair_subspace(w);
    CHECK((g.basis().transpose() * g.basis() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(fourier_pair_subspace(2), Error);
}

TEST_CASE("noiseless sine windows span the fourier pair") {
  NoisySineConfig cfg;
  cfg.a = 0.3;
  cfg.b = 2.0;
  cfg.c = 0.7;
  cfg.p = 4;
  cfg.w = 16;
  const NoisySine sine = gen_noisy_sine(cfg);
  const WindowMatrix X = sliding_windows(sine.x, cfg.w);
  CHECK(chordal_distance(pca_subspace(X.data, 2), fourier_pair_subspace(cfg.w)) <= 1e-8);

  const CentroidLip centre = centroid_mean_and_lip(X);
  CHECK((centre.mu.array() - cfg.a).abs().maxCoeff() < 1e-12);
  CHECK(centre.lip < 1e-12);
}

TEST_CASE("sine bound") {
  const Timeseries zero(std::vector<double>(64 * 32 + 31, 0.0));
  const BoundReport noiseless = sine_bound(1.0, 64, 32, zero);
  CHECK(noiseless.rhs == 0.0);
  CHECK(noiseless.applicable);

  RandomEngine rng = make_engine(3);
  std::uniform_real_distribution<double> uniform(-0.01, 0.01);
  std::vector<double> e(64 * 32 + 31);
  for (double& v : e) v = uniform(rng);
  double mean = 0.0;
  for (double v : e) mean += v;
  mean /= double(e.size());
  for (double& v : e) v -= mean;
  const Timeseries noise(e);

  const BoundReport r = sine_bound(1.0, 64, 32, noise);
  CHECK(r.applicable);
  CHECK(r.rhs < 0.1);
  CHECK(r.rhs == doctest::Approx(1.0 / (r.components.at("snr") - 1.0)));

  // Measured distance for the same noise riding on a unit sine.
  std::vector<double> x(e.size());
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::sin(2 * std::numbers::pi * double(t) / 32.0) + e[t];
  const WindowMatrix X = sliding_windows(Timeseries(x), 32);
  CHECK(chordal_distance(pca_subspace(X.data, 2), fourier_pair_subspace(32)) <= r.rhs);

  // Noise louder than the signal: snr < 1 makes the bound inapplicable.
  std::vector<double> loud(e);
  for (double& v : loud) v *= 1000.0;
  CHECK_FALSE(sine_bound(1.0, 64, 32, Timeseries(loud)).applicable);
}

TEST_CASE("centroid of padded windows is constant") {
  const Timeseries x({1.5, -2.0, 4.0, 0.25, 3.0});
  const CentroidLip c = centroid_mean_and_lip(zero_pad_windows(x, 3));
  const double expected = (1.5 - 2.0 + 4.0 + 0.25 + 3.0) / 7.0;
  CHECK((c.mu.array() - expected).abs().maxCoeff() < 1e-15);
  CHECK(c.lip < 1e-15);
}

TEST_CASE("circulant identity") {
  const CirculantCheck small = circulant_check(1.0, 0.0, 2, 3);
  CHECK(small.closed_form_deviation <= 1e-9);
  CHECK(small.projection_deviation <= 1e-9);
  CHECK(small.expected_eigenvalue == doctest::Approx(4.5));
  CHECK(small.eigenvalues(0) == doctest::Approx(4.5).epsilon(1e-8));
  CHECK(small.eigenvalues(1) == doctest::Approx(4.5).epsilon(1e-8));
  CHECK(std::abs(small.eigenvalues(2)) < 1e-9);

  const CirculantCheck zero = circulant_check(0.0, 0.3, 2, 5);
  CHECK(zero.closed_form_deviation == 0.0);
  CHECK(zero.eigenvalues.isZero());
}

TEST_CASE("sinusoidal fraction") {
  Eigen::VectorXd cosine(8);
  for (int t = 0; t < 8; ++t) cosine(t) = std::cos(2 * std::numbers::pi * t / 8.0);
  CHECK(sinusoidal_fraction(cosine, Eigen::VectorXd::Zero(8)) == doctest::Approx(1.0));
  CHECK(sinusoidal_fraction(Eigen::VectorXd::Constant(8, 2.0), Eigen::VectorXd::Zero(8)) ==
        doctest::Approx(0.0));
}

}
