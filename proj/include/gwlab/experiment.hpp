#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gwlab/attacks.hpp"
#include "gwlab/community.hpp"
#include "gwlab/dataset.hpp"
#include "gwlab/metrics.hpp"
#include "gwlab/watermark.hpp"

namespace gwlab {

struct DatasetConfig {
  std::string name;
  /// Local edge list; empty for a known dataset fetched into the cache.
  std::string path;
  /// Remote edge list (optionally gzip-compressed), downloaded into the cache.
  std::string url;
  std::size_t expected_nodes = 0;  // 0 = unchecked
  std::size_t expected_edges = 0;
  bool allow_extra_columns = false;
  std::vector<std::size_t> flip_levels;
};

/// A detector run on each trial's watermarked graph, or an imported
/// clustering of the original graph (e.g. Infomap output).
struct ClusteringConfig {
  std::string name;
  std::optional<Detector> detector;
  std::string file;
};

struct ExperimentConfig {
  std::vector<DatasetConfig> datasets;
  std::vector<AttackKind> attacks;
  std::vector<ClusteringConfig> clusterings;
  std::size_t trials = 10;
  std::uint64_t master_seed = 0;
  EmbeddingParams params;
  std::string output_dir = "results";
  std::size_t feasibility_samples = 1000;
  /// Abort when the density criterion fails (the degree criterion always
  /// aborts).
  bool require_density = true;
  /// Worker threads for the trial sweep; 0 keeps the OpenMP default.
  int threads = 0;
  std::optional<std::filesystem::path> cache_dir;
};

/// Parses the JSON config document; see README for the schema. Known dataset
/// names pick up their expected counts and default flip levels.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::string& path);

/// Throws InvalidArgument unless trials >= 1 and every flip level is within
/// 0.1% of `edge_count`.
void check_flip_levels(const DatasetConfig& d, std::size_t edge_count);

/// One CSV row plus in-memory extras used by audits.
struct ResultRow {
  TrialRecord record;
  std::uint64_t seed = 0;
  std::string verdict_reason;
  bool fault = false;
  double cluster_ms = 0.0;
  // Not serialized.
  bool exhausted_early = false;
  std::size_t performed = 0;
  std::size_t watermarked_edges = 0;
};

inline constexpr const char* kResultCsvHeader =
    "dataset,attack,clustering,flips,trial,seed,extracted,verdict_reason,ed_pct,dk2,dcc_pct,"
    "cluster_ms,attack_ms,extract_ms";

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

void write_result_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_result_csv(std::istream& in);

/// A loaded, verified dataset ready for trials.
struct PreparedDataset {
  DatasetConfig config;
  LoadedGraph loaded;
  FeasibilityReport feasibility;
  /// Imported clusterings keyed by ClusteringConfig::name, over original ids.
  std::vector<std::pair<std::string, Clustering>> imported;
};

/// Loads (fetching if needed), verifies counts and flip budget, and checks
/// feasibility. Throws InfeasibleError / DatasetError before any trial runs.
PreparedDataset prepare_dataset(const ExperimentConfig& config, const DatasetConfig& dataset);

struct TrialKey {
  std::string dataset;
  AttackKind attack = AttackKind::RandomBaseline;
  std::string clustering;  // "none" for the baseline
  std::size_t flips = 0;
  std::size_t trial = 0;
};

/// Seed of the attack step of one row (the CSV `seed` column).
std::uint64_t trial_seed(std::uint64_t master_seed, const TrialKey& key);

/// Seed of the watermarked copy of trial `trial`. Every attack, clustering and
/// flip level of that trial sees the same copy, so distortion at a fixed flip
/// count is comparable across attack kinds.
std::uint64_t copy_seed(std::uint64_t master_seed, const std::string& dataset, std::size_t trial);

/// Runs one trial: embed, anonymize, cluster the anonymized copy, attack,
/// measure, extract. Exceptions become fault rows. Same result as the
/// matching row of run_experiment apart from timings.
ResultRow run_trial(const PreparedDataset& data, const ExperimentConfig& config,
                    const TrialKey& key);

/// All (dataset × attack × clustering × flips × trial) rows in that nesting
/// order. Trials run on an OpenMP worker pool; row order does not depend on
/// completion order.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config,
                                      const std::function<void(const std::string&)>& log = {});

/// Writes results.csv, summary.csv and the SVG figures into output_dir and
/// returns the rows.
std::vector<ResultRow> run_experiment_to_dir(
    const ExperimentConfig& config, const std::function<void(const std::string&)>& log = {});

}  // namespace gwlab
