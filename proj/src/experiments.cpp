#include "slidewin/experiments.hpp"

#include "slidewin/cluster.hpp"
#include "slidewin/diagnostics.hpp"
#include "slidewin/error.hpp"
#include "slidewin/oracle.hpp"
#include "slidewin/random.hpp"
#include "slidewin/series.hpp"
#include "slidewin/synth.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#ifndef SLIDEWIN_VERSION
#define SLIDEWIN_VERSION "dev"
#endif

namespace slidewin {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Seed streams split off the master seed.
constexpr std::uint64_t kSourceStream = 1;
constexpr std::uint64_t kKMeansStream = 2;
constexpr std::uint64_t kSpectralStream = 3;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

json header_block() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&t, &utc);
  std::ostringstream stamp;
  stamp << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  char host[256] = {};
  gethostname(host, sizeof(host) - 1);
  return {{"generated_at", stamp.str()}, {"host", host}};
}

json config_json(const Config& cfg) {
  json out = json::object();
  for (const auto& [full, value] : cfg.entries()) {
    const auto dot = full.find('.');
    out[full.substr(0, dot)][full.substr(dot + 1)] = value;
  }
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json bound_json(const BoundReport& r) {
  return {{"lhs", r.lhs},
          {"rhs", r.rhs},
          {"satisfied", r.satisfied},
          {"applicable", r.applicable},
          {"components", r.components}};
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Config, "cannot write " + path.string());
  out << body;
}

/// Columns: t, centroid_0, ..., centroid_{k-1}.
void write_centroid_csv(const fs::path& path, const Eigen::MatrixXd& centroids) {
  std::ostringstream os;
  os << "# centroid traces, one column per centroid, row t = window offset\nt";
  for (Eigen::Index j = 0; j < centroids.cols(); ++j) os << ",centroid_" << j;
  os << '\n';
  for (Eigen::Index t = 0; t < centroids.rows(); ++t) {
    os << t;
    for (Eigen::Index j = 0; j < centroids.cols(); ++j) os << ',' << fmt(centroids(t, j));
    os << '\n';
  }
  write_text(path, os.str());
}

ExperimentSummary finish(const std::string& experiment, const Config& cfg, const fs::path& out_dir,
                         json results, std::size_t violations) {
  json report;
  report["header"] = header_block();
  report["tool"] = "slidewin";
  report["version"] = SLIDEWIN_VERSION;
  report["experiment"] = experiment;
  report["config"] = config_json(cfg);
  report["results"] = results;
  report["violations"] = violations;

  const fs::path report_path = out_dir / "report.json";
  write_text(report_path, report.dump(2) + "\n");
  write_text(out_dir / "config.ini", cfg.to_ini());
  return {experiment, report_path, std::move(results), violations};
}

KMeansConfig kmeans_config(Config& cfg, const std::string& section, std::uint64_t seed) {
  KMeansConfig out;
  out.restarts = static_cast<int>(cfg.count(section + ".restarts", 10));
  out.max_iters = static_cast<int>(cfg.count(section + ".max_iters", 300));
  out.tol = cfg.number(section + ".tol", 1e-8);
  out.seed = seed;
  return out;
}

Increment parse_increment(const std::string& key, const std::string& raw) {
  if (raw == "normal") return Increment::Normal;
  if (raw == "rademacher") return Increment::Rademacher;
  throw Error(ErrorCode::Config, "config key '" + key + "': expected normal or rademacher, got '" + raw + "'");
}

json clustering_json(const ClusteringResult& r) {
  return {{"sse", r.sse},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"restarts", r.restarts_used},
          {"cluster_sizes", [&] {
             std::vector<std::size_t> sizes;
             for (const auto& c : r.partition.clusters()) sizes.push_back(c.size());
             return sizes;
           }()}};
}

std::size_t resolve_threads(Config& cfg) {
  std::size_t threads = cfg.count("run.threads", 0);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return threads;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

Timeseries load_source_series(Config& cfg, std::uint64_t seed) {
  const std::string type = cfg.text("source.type", "random_walk");
  if (type == "random_walk") {
    RandomWalkConfig walk;
    walk.m = cfg.count("source.m", 4096);
    walk.increments = parse_increment("source.increments", cfg.text("source.increments", "normal"));
    walk.seed = derive_seed(seed, kSourceStream);
    return gen_random_walk(walk);
  }
  if (type == "csv") {
    const std::string path = cfg.text("source.path", "");
    if (path.empty()) throw Error(ErrorCode::Config, "source.path is required for csv input");
    const std::string column = cfg.text("source.column", "Close");
    const std::string transform = cfg.text("source.transform", "log");
    Transform tr;
    if (transform == "log") {
      tr = Transform::Log;
    } else if (transform == "none") {
      tr = Transform::None;
    } else {
      throw Error(ErrorCode::Config, "source.transform must be log or none");
    }
    return load_csv(path, column, tr);
  }
  throw Error(ErrorCode::Config, "source.type must be random_walk or csv for the flat experiment");
}

}  // namespace

ExperimentSummary run_flat_experiment(Config& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const std::uint64_t seed = cfg.seed("run.seed", 0);
  const Timeseries x = load_source_series(cfg, seed);
  const std::size_t w = cfg.count("windows.w", 8);
  const bool padded = cfg.flag("windows.padded", true);
  const int k = static_cast<int>(cfg.count("kmeans.k", 10));
  const KMeansConfig km_cfg = kmeans_config(cfg, "kmeans", derive_seed(seed, kKMeansStream));
  const KMeansConfig sp_cfg = kmeans_config(cfg, "spectral", derive_seed(seed, kSpectralStream));

  // Validate the bound first so a constant series fails before any clustering.
  BoundReport bound = flatness_bound(x, w);

  const WindowMatrix windows = padded ? zero_pad_windows(x, w) : sliding_windows(x, w);
  const Eigen::VectorXd mu = windows.data.rowwise().mean();
  const ClusteringResult km = kmeans(windows, k, km_cfg);

  json km_ratios = json::array();
  double max_ratio = 0.0;
  for (int j = 0; j < k; ++j) {
    try {
      const double ratio = flatness_ratio(km.centroids.col(j), mu);
      max_ratio = std::max(max_ratio, ratio);
      km_ratios.push_back(ratio);
    } catch (const Error&) {
      km_ratios.push_back(nullptr);
    }
  }

  // The flat-centroid bound concerns k = 2 spectral centroids of padded windows.
  const WindowMatrix padded_windows = padded ? windows : zero_pad_windows(x, w);
  const Eigen::VectorXd padded_mu = padded_windows.data.rowwise().mean();
  const ClusteringResult sp = spectral_kmeans(padded_windows, 2, sp_cfg);

  std::size_t violations = 0;
  json sp_ratios = json::array();
  double worst = 0.0;
  for (int j = 0; j < sp.partition.k(); ++j) {
    try {
      const double ratio = flatness_ratio(sp.centroids.col(j), padded_mu);
      worst = std::max(worst, ratio);
      sp_ratios.push_back(ratio);
      if (ratio > bound.rhs) ++violations;
    } catch (const Error&) {
      sp_ratios.push_back(nullptr);
    }
  }
  bound.set_measured(worst);

  const auto [mean, centred] = centered_norms(x);
  json results = {
      {"series", {{"m", x.size()}, {"mean", mean}, {"centered_l2", centred},
                  {"sup_norm", sup_norm(x)}, {"lipschitz", lipschitz_seminorm(x)}}},
      {"kmeans", clustering_json(km)},
      {"spectral_k2", clustering_json(sp)},
  };
  results["kmeans"]["k"] = k;
  results["kmeans"]["padded"] = padded;
  results["kmeans"]["flatness_ratios"] = km_ratios;
  results["kmeans"]["max_flatness_ratio"] = max_ratio;
  results["spectral_k2"]["padded"] = true;
  results["spectral_k2"]["flatness_ratios"] = sp_ratios;
  results["spectral_k2"]["rank_deficient"] = sp.rank_deficient;
  results["spectral_k2"]["flatness_bound"] = bound_json(bound);
  results["global_mean_is_constant"] =
      (padded_mu.array() - padded_mu.mean()).abs().maxCoeff() <= 1e-12 * std::max(1.0, padded_mu.cwiseAbs().maxCoeff());

  write_centroid_csv(out_dir / "centroids_kmeans.csv", km.centroids);
  write_centroid_csv(out_dir / "centroids_spectral.csv", sp.centroids);
  {
    std::ostringstream os;
    os << "# input series\nt,x\n";
    for (std::size_t t = 0; t < x.size(); ++t) os << t << ',' << fmt(x[t]) << '\n';
    write_text(out_dir / "series.csv", os.str());
  }
  return finish("flat", cfg, out_dir, std::move(results), violations);
}

ExperimentSummary run_sine_experiment(Config& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const std::uint64_t seed = cfg.seed("run.seed", 0);
  const std::string type = cfg.text("source.type", "noisy_sine");
  const int k = static_cast<int>(cfg.count("kmeans.k", 3));
  const KMeansConfig km_cfg = kmeans_config(cfg, "kmeans", derive_seed(seed, kKMeansStream));
  const KMeansConfig sp_cfg = kmeans_config(cfg, "spectral", derive_seed(seed, kSpectralStream));

  std::optional<NoisySine> sine;
  NoisySineConfig sine_cfg;
  std::size_t w = 0;
  Timeseries x(std::vector<double>{0.0});
  if (type == "noisy_sine") {
    sine_cfg.a = cfg.number("source.a", 0.0);
    sine_cfg.b = cfg.number("source.b", 1.0);
    sine_cfg.c = cfg.number("source.c", 0.0);
    sine_cfg.p = cfg.count("source.p", 64);
    sine_cfg.w = cfg.count("source.w", 32);
    sine_cfg.noise_sigma = cfg.number("source.sigma", 0.05);
    sine_cfg.seed = derive_seed(seed, kSourceStream);
    sine = gen_noisy_sine(sine_cfg);
    x = sine->x;
    w = sine_cfg.w;
  } else if (type == "cbf") {
    const std::size_t draws = cfg.count("source.draws", 30);
    const std::size_t length = cfg.count("source.length", 128);
    x = gen_cbf_concatenation(draws, length, derive_seed(seed, kSourceStream));
    w = cfg.count("windows.w", length);
  } else {
    throw Error(ErrorCode::Config, "source.type must be noisy_sine or cbf for the sine experiment");
  }

  const Spectrum spectrum = dft_magnitudes(x);
  const WindowMatrix windows = sliding_windows(x, w);
  const CentroidLip centre = centroid_mean_and_lip(windows);
  const ClusteringResult km = kmeans(windows, k, km_cfg);
  const ClusteringResult sp = spectral_kmeans(windows, k, sp_cfg);

  std::size_t violations = 0;
  json results;
  results["series"] = {{"m", x.size()}, {"w", w}, {"n", windows.n}};
  results["dft"] = {{"dominant_frequency", spectrum.dominant_frequency},
                    {"dominant_period", spectrum.dominant_period}};
  results["centroid_mean"] = {{"lipschitz", centre.lip}};

  const Subspace fourier = fourier_pair_subspace(w);
  const Subspace pca = pca_subspace(windows.data, 2);
  const double chordal = chordal_distance(pca, fourier);
  results["pca_top2"] = {{"chordal_distance_to_fourier_pair", chordal},
                         {"principal_cosines", vector_json(principal_cosines(pca, fourier))}};

  if (sine) {
    const double lip_bound = 2.0 / static_cast<double>(sine_cfg.p * w) * sup_norm(sine->noise);
    const bool lip_ok = centre.lip <= lip_bound + 1e-12;
    if (!lip_ok) ++violations;
    results["centroid_mean"]["bound"] = lip_bound;
    results["centroid_mean"]["satisfied"] = lip_ok;

    BoundReport snr = sine_bound(sine_cfg.b, sine_cfg.p, w, sine->noise);
    snr.set_measured(chordal);
    if (snr.applicable && !snr.satisfied) ++violations;
    results["pca_top2"]["sine_bound"] = bound_json(snr);
  }

  auto sinusoidality = [&](const ClusteringResult& r) {
    json fractions = json::array();
    for (Eigen::Index j = 0; j < r.centroids.cols(); ++j) {
      try {
        fractions.push_back(sinusoidal_fraction(r.centroids.col(j), centre.mu));
      } catch (const Error&) {
        fractions.push_back(nullptr);
      }
    }
    return fractions;
  };
  results["kmeans"] = clustering_json(km);
  results["kmeans"]["sinusoidal_fractions"] = sinusoidality(km);
  results["spectral"] = clustering_json(sp);
  results["spectral"]["sinusoidal_fractions"] = sinusoidality(sp);
  results["spectral"]["rank_deficient"] = sp.rank_deficient;

  write_centroid_csv(out_dir / "centroids_kmeans.csv", km.centroids);
  write_centroid_csv(out_dir / "centroids_spectral.csv", sp.centroids);
  {
    std::ostringstream os;
    os << "# DFT magnitudes for f in [1, m/2]; period = m / f\nf,magnitude,period\n";
    for (std::size_t f = 1; f <= x.size() / 2; ++f) {
      os << f << ',' << fmt(spectrum.magnitudes[f]) << ','
         << fmt(static_cast<double>(x.size()) / static_cast<double>(f)) << '\n';
    }
    write_text(out_dir / "spectrum.csv", os.str());
  }
  return finish("sine", cfg, out_dir, std::move(results), violations);
}

ExperimentSummary run_interval_experiment(Config& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const std::uint64_t seed = cfg.seed("run.seed", 0);
  const std::size_t trials = cfg.count("run.trials", 1000);
  const std::size_t threads = resolve_threads(cfg);
  const std::size_t m = cfg.count("walk.m", 100);
  const Increment increments = parse_increment("walk.increments", cfg.text("walk.increments", "normal"));
  const int k = static_cast<int>(cfg.count("kmeans.k", 3));
  const KMeansConfig base = kmeans_config(cfg, "kmeans", 0);

  if (k < 1 || static_cast<std::size_t>(k) > m) {
    throw Error(ErrorCode::Config, "kmeans.k must lie in [1, walk.m]");
  }
  const std::size_t w_max = m - static_cast<std::size_t>(k) + 1;

  // hits[trial * w_max + (w - 1)] = 1 when that run gave interval clusters.
  std::vector<unsigned char> hits(trials * w_max, 0);
  parallel_for(trials, threads, [&](std::size_t trial) {
    const std::uint64_t trial_seed = derive_seed(seed, trial);
    const Timeseries x = gen_random_walk({m, increments, derive_seed(trial_seed, 0)});
    for (std::size_t w = 1; w <= w_max; ++w) {
      KMeansConfig run_cfg = base;
      run_cfg.seed = derive_seed(trial_seed, w);
      const ClusteringResult r = kmeans(sliding_windows(x, w), k, run_cfg);
      hits[trial * w_max + (w - 1)] = is_interval_partition(r.partition) ? 1 : 0;
    }
  });

  std::vector<double> proportion(w_max, 0.0);
  std::ostringstream os;
  os << "# proportion of trials whose k-means clusters are all intervals\nw,n,intervals,trials,proportion\n";
  for (std::size_t w = 1; w <= w_max; ++w) {
    std::size_t count = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) count += hits[trial * w_max + (w - 1)];
    proportion[w - 1] = trials ? static_cast<double>(count) / static_cast<double>(trials) : 0.0;
    os << w << ',' << (m - w + 1) << ',' << count << ',' << trials << ',' << fmt(proportion[w - 1]) << '\n';
  }
  write_text(out_dir / "interval_proportions.csv", os.str());

  json results;
  results["w_max"] = w_max;
  results["proportions"] = proportion;
  return finish("intervals", cfg, out_dir, std::move(results), 0);
}

ExperimentSummary run_oracle_suite(Config& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const std::uint64_t seed = cfg.seed("run.seed", 0);
  const std::size_t n_min = cfg.count("theorem3.n_min", 3);
  const std::size_t n_max = cfg.count("theorem3.n_max", 12);
  const std::vector<std::size_t> k_values = cfg.counts("theorem3.k_values", {2, 3, 4});
  const std::vector<std::size_t> w_values = cfg.counts("theorem3.w_values", {1, 7});
  const std::size_t size_guard = cfg.count("theorem3.size_guard", kDefaultSizeGuard);
  const std::size_t lemma_range = cfg.count("lemma.range", 16);
  const std::size_t lemma_size = cfg.count("lemma.max_subset", 6);
  const std::vector<std::size_t> mc_w = cfg.counts("montecarlo.w_values", {1, 3, 5});
  const std::vector<std::size_t> mc_gaps = cfg.counts("montecarlo.gaps", {1, 2, 4});
  const std::size_t mc_trials = cfg.count("montecarlo.trials", 10000);
  const double mc_z = cfg.number("montecarlo.max_z", 4.0);
  const double exponent = cfg.number("hook.gap_exponent", 1.0);

  if (n_max > size_guard) {
    throw Error(ErrorCode::SizeGuard, "theorem3.n_max = " + std::to_string(n_max) +
                                          " exceeds theorem3.size_guard = " + std::to_string(size_guard));
  }

  // Test hook: any exponent other than 1 breaks the expected-distance identity
  // and must surface as violations.
  const GapKernel kernel = exponent == 1.0 ? GapKernel(identity_gap) : GapKernel([exponent](std::size_t gap) {
    return std::pow(static_cast<double>(gap), exponent);
  });

  std::size_t violations = 0;
  json theorem = json::array();
  std::ostringstream t3;
  t3 << "# expected-objective minimizers versus balanced interval partitions\n"
        "n,k,w,enumerated,minimizers,expected_minimizers,match,minimum,closed_form\n";
  for (std::size_t n = n_min; n <= n_max; ++n) {
    for (std::size_t k : k_values) {
      if (k > n || k < 1) continue;
      std::vector<Partition> expected = balanced_interval_partitions(n, static_cast<int>(k));
      std::sort(expected.begin(), expected.end(),
                [](const Partition& a, const Partition& b) { return a.labels() < b.labels(); });
      for (std::size_t w : w_values) {
        ExpectedMinimizers found = minimize_expected_objective(n, w, static_cast<int>(k), kernel, size_guard);
        std::sort(found.minimizers.begin(), found.minimizers.end(),
                  [](const Partition& a, const Partition& b) { return a.labels() < b.labels(); });
        const bool match = found.minimizers == expected;

        double sum_sq = 0.0;
        for (const auto& c : expected.front().clusters()) sum_sq += static_cast<double>(c.size() * c.size());
        const double closed = static_cast<double>(w) * (sum_sq - static_cast<double>(k)) / 3.0;
        const bool value_ok = std::abs(found.minimum - closed) <= 1e-9 * std::max(1.0, closed);
        if (!match || !value_ok) ++violations;

        theorem.push_back({{"n", n}, {"k", k}, {"w", w}, {"enumerated", found.enumerated},
                           {"minimizers", found.minimizers.size()},
                           {"expected_minimizers", expected.size()}, {"match", match},
                           {"minimum", found.minimum}, {"closed_form", closed}, {"value_match", value_ok}});
        t3 << n << ',' << k << ',' << w << ',' << found.enumerated << ',' << found.minimizers.size() << ','
           << expected.size() << ',' << (match && value_ok ? 1 : 0) << ',' << fmt(found.minimum) << ','
           << fmt(closed) << '\n';
      }
    }
  }
  write_text(out_dir / "theorem3.csv", t3.str());

  const LemmaReport lemma = check_interval_lemma(lemma_range, lemma_size, kernel);
  violations += lemma.inequality_violations + lemma.equality_violations;

  json mc = json::array();
  std::ostringstream mcs;
  mcs << "# Monte Carlo E||x_s - x_s'||^2 against w |s - s'|\nw,gap,trials,estimate,standard_error,expected,z\n";
  std::uint64_t stream = 0;
  for (std::size_t w : mc_w) {
    for (std::size_t gap : mc_gaps) {
      const MonteCarloEstimate est =
          mc_expected_distance(w, gap, 0, mc_trials, derive_seed(seed, stream++));
      const double expected = static_cast<double>(w * gap);
      const double z = est.standard_error > 0.0 ? std::abs(est.estimate - expected) / est.standard_error
                                                : (est.estimate == expected ? 0.0 : INFINITY);
      const bool ok = z <= mc_z;
      if (!ok) ++violations;
      mc.push_back({{"w", w}, {"gap", gap}, {"estimate", est.estimate},
                    {"standard_error", est.standard_error}, {"expected", expected}, {"z", z}, {"within", ok}});
      mcs << w << ',' << gap << ',' << est.trials << ',' << fmt(est.estimate) << ',' << fmt(est.standard_error)
          << ',' << fmt(expected) << ',' << fmt(z) << '\n';
    }
  }
  write_text(out_dir / "montecarlo.csv", mcs.str());

  json results;
  results["theorem3"] = theorem;
  results["interval_lemma"] = {{"checked", lemma.checked},
                               {"equalities", lemma.equalities},
                               {"inequality_violations", lemma.inequality_violations},
                               {"equality_violations", lemma.equality_violations}};
  results["montecarlo"] = mc;
  return finish("oracle", cfg, out_dir, std::move(results), violations);
}

ExperimentSummary run_experiment(const std::string& name, Config& cfg, const fs::path& out_dir) {
  if (name == "flat") return run_flat_experiment(cfg, out_dir);
  if (name == "sine") return run_sine_experiment(cfg, out_dir);
  if (name == "intervals") return run_interval_experiment(cfg, out_dir);
  if (name == "oracle") return run_oracle_suite(cfg, out_dir);
  throw Error(ErrorCode::Config, "unknown experiment '" + name + "'");
}

}  // namespace slidewin
