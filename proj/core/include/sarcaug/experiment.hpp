#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sarcaug/augment.hpp"
#include "sarcaug/classify.hpp"
#include "sarcaug/corpus.hpp"
#include "sarcaug/metrics.hpp"
#include "sarcaug/preprocess.hpp"

namespace sarcaug {

struct DatasetRef {
  std::string name;
  std::filesystem::path path;
};

/// The full sweep description. Loaded from a JSON plan file; see
/// load_plan() for the schema.
struct ExperimentPlan {
  std::vector<DatasetRef> datasets;
  std::vector<double> levels;  // increase percentages; 0 = non-augmented control
  PipelineConfig pipeline;
  AugmentPolicy policy_template;     // per-cell seed/pct are filled in per run
  ClassifierConfig classifier;
  bool auto_size_profile = true;     // pick the batch/epoch profile per dataset size
  std::filesystem::path embedding_path;
  std::optional<std::filesystem::path> embedding_cache;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir;
  int threads = 1;
};

void validate_plan(const ExperimentPlan& plan);

/// Parses a plan JSON file; unknown or ill-typed fields raise ConfigError
/// naming the field.
ExperimentPlan load_plan(const std::filesystem::path& path);
std::string plan_to_json(const ExperimentPlan& plan);

/// One (dataset, level) cell. duration_seconds is informational only and is
/// never persisted, so result directories stay byte-identical across runs.
struct RunResult {
  std::string dataset;
  double level = 0.0;
  MetricSet metrics;
  std::optional<AugmentReport> augment_report;  // absent at level 0
  std::string config_fingerprint;
  std::uint64_t seed = 0;
  double duration_seconds = 0.0;
  std::string run_path;  // relative to the results directory
};

struct RunFailure {
  std::string dataset;
  double level = 0.0;
  std::string error;
};

struct ExperimentOutcome {
  std::vector<RunResult> results;
  std::vector<RunFailure> failures;
};

/// Runs the dataset x level matrix: load, preprocess, dedup across datasets,
/// merge train+val, then per level augment/train/evaluate. Each cell persists
/// to runs/<dataset>/<level>.json; a manifest.json is atomically replaced at
/// the end. A failing cell is recorded and the sweep continues.
ExperimentOutcome run_experiment(const ExperimentPlan& plan);

/// Reads a results directory back into RunResults (for `report`).
std::vector<RunResult> load_results(const std::filesystem::path& results_dir);

enum class ReportFormat { markdown, csv };

/// One table per metric (F-score, MCC), one row per dataset, one column per
/// level, 4-decimal values; with_deltas adds point/relative-delta tables
/// against the level-0 column.
std::string emit_report(const std::vector<RunResult>& results, ReportFormat format,
                        bool with_deltas = false);

// Exit codes shared by the CLI and documented in the README.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartialFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitData = 4;

}  // namespace sarcaug
