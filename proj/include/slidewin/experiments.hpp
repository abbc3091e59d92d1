#pragma once

#include "slidewin/config.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <string>

namespace slidewin {

/// What an experiment wrote and whether every checked inequality held.
struct ExperimentSummary {
  std::string experiment;
  std::filesystem::path report_path;
  nlohmann::json results;
  std::size_t violations = 0;
};

/// Windows of a random walk or CSV series; k-means centroids (raw windows,
/// default k = 10) and k = 2 spectral centroids of the zero-padded windows
/// checked against the flat-centroid bound.
ExperimentSummary run_flat_experiment(Config& cfg, const std::filesystem::path& out_dir);

/// Noisy w-periodic sine or concatenated cylinder-bell-funnel draws; checks
/// the centroid Lipschitz bound and the chordal distance between the top-2
/// principal subspace and the Fourier pair against the snr bound.
ExperimentSummary run_sine_experiment(Config& cfg, const std::filesystem::path& out_dir);

/// Proportion of random-walk trials whose k-means partition is an interval
/// partition, for every window length w in [1, m - k + 1].
ExperimentSummary run_interval_experiment(Config& cfg, const std::filesystem::path& out_dir);

/// Exhaustive expected-objective minimizers, the interval lemma and the
/// Monte Carlo distance table.
ExperimentSummary run_oracle_suite(Config& cfg, const std::filesystem::path& out_dir);

/// Dispatches on "flat", "sine", "intervals" or "oracle".
ExperimentSummary run_experiment(const std::string& name, Config& cfg,
                                 const std::filesystem::path& out_dir);

}  // namespace slidewin
