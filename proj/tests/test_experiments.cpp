#include "slidewin/config.hpp"
#include "slidewin/error.hpp"
#include "slidewin/experiments.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace slidewin;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("slidewin_exp_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json without_header(const fs::path& report) {
  nlohmann::json j = nlohmann::json::parse(slurp(report));
  j.erase("header");
  return j;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SLIDEWIN_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("config parsing, defaults and overrides") {
  Config cfg = Config::parse_ini("[windows]\nw = 16\n[run]\nseed=5\n");
  CHECK(cfg.count("windows.w", 8) == 16);
  CHECK(cfg.seed("run.seed", 0) == 5);
  CHECK(cfg.number("kmeans.tol", 1e-8) == 1e-8);
  CHECK(cfg.has("kmeans.tol"));
  cfg.apply_override("windows.w=4");
  CHECK(cfg.count("windows.w", 8) == 4);
  CHECK(cfg.counts("x.list", {1, 2, 3}) == std::vector<std::size_t>{1, 2, 3});
  CHECK_THROWS_AS(cfg.apply_override("nowhere"), Error);

  cfg.set("windows.w", "sixteen");
  try {
    cfg.count("windows.w", 8);
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }

  const Config round = Config::parse_ini(Config::parse_ini("[b]\ny = 2\n[a]\nx = 1\n").to_ini());
  CHECK(round.entries().at("a.x") == "1");
  CHECK(round.entries().at("b.y") == "2");
}

TEST_CASE("flat experiment on a short random walk") {
  Config cfg = Config::parse_ini("[source]\nm = 512\n[windows]\nw = 4\n[kmeans]\nk = 4\n");
  const fs::path out = scratch("flat");
  const ExperimentSummary s = run_flat_experiment(cfg, out);
  CHECK(s.violations == 0);
  CHECK(s.results["spectral_k2"]["flatness_bound"]["satisfied"].get<bool>());
  CHECK(s.results["global_mean_is_constant"].get<bool>());
  CHECK(fs::exists(out / "centroids_kmeans.csv"));
  CHECK(fs::exists(out / "centroids_spectral.csv"));
  CHECK(fs::exists(out / "config.ini"));
}

TEST_CASE("flat experiment surfaces a constant series") {
  const fs::path csv = fs::temp_directory_path() / "slidewin_constant.csv";
  std::ofstream(csv) << "Close\n2\n2\n2\n2\n2\n";
  Config cfg;
  cfg.set("source.type", "csv");
  cfg.set("source.path", csv.string());
  cfg.set("windows.w", "2");
  cfg.set("kmeans.k", "2");
  try {
    run_flat_experiment(cfg, scratch("flat_constant"));
    FAIL("expected degenerate denominator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateDenominator);
  }
}

TEST_CASE("sine experiment on noiseless and noisy sines") {
  Config clean = Config::parse_ini("[source]\np = 8\nw = 16\nsigma = 0\n");
  const ExperimentSummary a = run_sine_experiment(clean, scratch("sine_clean"));
  CHECK(a.results["pca_top2"]["chordal_distance_to_fourier_pair"].get<double>() <= 1e-8);
  CHECK(a.violations == 0);

  Config noisy = Config::parse_ini("[source]\np = 64\nw = 32\nsigma = 0.05\n");
  const ExperimentSummary b = run_sine_experiment(noisy, scratch("sine_noisy"));
  CHECK(b.results["pca_top2"]["sine_bound"]["applicable"].get<bool>());
  CHECK(b.results["pca_top2"]["sine_bound"]["satisfied"].get<bool>());
  CHECK(b.results["dft"]["dominant_period"].get<double>() == doctest::Approx(32.0).epsilon(0.01));
  CHECK(b.violations == 0);
}

TEST_CASE("interval experiment smoke run is reproducible") {
  Config cfg = Config::parse_ini("[run]\ntrials = 50\nseed = 3\n[walk]\nm = 40\n");
  const fs::path out1 = scratch("intervals_1");
  const fs::path out2 = scratch("intervals_2");
  const ExperimentSummary s = run_interval_experiment(cfg, out1);
  const auto proportions = s.results["proportions"].get<std::vector<double>>();
  CHECK(proportions.size() == 38);
  CHECK(proportions.back() == 1.0);

  Config again = Config::load(out1 / "report.json");
  again.set("run.threads", "4");
  run_interval_experiment(again, out2);
  CHECK(slurp(out1 / "interval_proportions.csv") == slurp(out2 / "interval_proportions.csv"));
}

TEST_CASE("oracle suite detects a tampered objective") {
  Config cfg = Config::parse_ini("[theorem3]\nn_max = 7\n[lemma]\nrange = 10\n[montecarlo]\ntrials = 2000\n");
  CHECK(run_oracle_suite(cfg, scratch("oracle_ok")).violations == 0);

  Config tampered = Config::parse_ini("[theorem3]\nn_max = 7\n[lemma]\nrange = 10\n[montecarlo]\ntrials = 200\n[hook]\ngap_exponent = 1.5\n");
  CHECK(run_oracle_suite(tampered, scratch("oracle_tampered")).violations > 0);
}

TEST_CASE("rerunning from an embedded config reproduces every output byte") {
  Config cfg = Config::parse_ini("[source]\nm = 300\n[windows]\nw = 5\n[kmeans]\nk = 3\n[run]\nseed = 17\n");
  const fs::path first = scratch("determinism_1");
  const fs::path second = scratch("determinism_2");
  run_flat_experiment(cfg, first);
  Config reloaded = Config::load(first / "config.ini");
  run_flat_experiment(reloaded, second);
  CHECK(without_header(first / "report.json") == without_header(second / "report.json"));
  for (const char* name : {"centroids_kmeans.csv", "centroids_spectral.csv", "series.csv", "config.ini"}) {
    CHECK(slurp(first / name) == slurp(second / name));
  }
}

TEST_CASE("cli exit codes") {
  const fs::path out = scratch("cli");
  CHECK(run_cli("oracle --set theorem3.n_max=6 --set lemma.range=8 --set montecarlo.trials=500 --out " +
                (out / "ok").string()) == 0);
  CHECK(run_cli("oracle --set theorem3.n_max=6 --set lemma.range=8 --set montecarlo.trials=500 "
                "--set hook.gap_exponent=1.5 --out " + (out / "bad").string()) == 5);
  CHECK(run_cli("oracle --set theorem3.n_max=15 --out " + (out / "guard").string()) == 4);
  CHECK(run_cli("flat --set windows.w=abc --out " + (out / "cfg").string()) == 2);
  CHECK(run_cli("flat --set source.type=csv --set source.path=/nonexistent.csv --out " +
                (out / "data").string()) == 3);
  CHECK(run_cli("sine --seed 4 --set source.p=4 --set source.w=8 --out " + (out / "sine").string()) == 0);
  CHECK(fs::exists(out / "sine" / "report.json"));
}

}
