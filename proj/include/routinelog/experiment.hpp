#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "routinelog/clustering.hpp"
#include "routinelog/core.hpp"
#include "routinelog/metrics.hpp"
#include "routinelog/noise.hpp"
#include "routinelog/segmentation.hpp"

namespace routinelog {

struct PipelineResult {
  Segmentation segmentation;
  ClusterLabeling labeling;
  ClusterSet clusters;
};

/// segment -> encode -> cluster -> routine logs. An empty UI log (or one
/// without completion actions) yields zero clusters.
PipelineResult run_pipeline(const UILog& log, const CompletionSet& finals,
                            const ActionAlphabet& alphabet, const ClusteringConfig& config);

/// One UI log of an experiment with its ground truth.
struct ExperimentLog {
  std::string name;
  UILog log;
  ActionAlphabet alphabet;
  CompletionSet completion;
  GroundTruthActionSets truth;
  std::vector<PetriNet> models;
};

/// Either our extraction with a clustering configuration, or the post-hoc
/// baseline assignment fed with per-type action sets (given as labels).
struct Technique {
  enum class Kind { extraction, baseline };
  Kind kind = Kind::extraction;
  ClusteringConfig clustering;  // extraction; k = 0 means "number of models"
  std::string baseline_name;    // baseline
  std::vector<std::pair<std::string, std::vector<std::string>>> action_sets;  // baseline

  static Technique extraction(ClusteringConfig c);
  static Technique baseline(std::string name,
                            std::vector<std::pair<std::string, std::vector<std::string>>> sets);

  /// Report columns: ("ours", method) or ("baseline:<name>", "nearest_vector").
  std::string technique_name() const;
  std::string clusterer_name() const;
};

struct ExperimentPlan {
  std::vector<ExperimentLog> logs;
  std::vector<double> noise_levels{0.0, 0.1, 0.2, 0.3, 0.4};
  std::size_t repetitions = 10;
  std::vector<Technique> techniques;
  std::uint64_t master_seed = 0;
  bool preserve_finals = true;
  bool insert_pool_includes_finals = false;
  std::size_t workers = 1;
  /// Fill runtime_ms; off by default so reports are byte-reproducible.
  bool record_runtime = false;

  /// Throws Error for an invalid plan.
  void validate() const;
};

/// Noise seed of one grid cell; independent of the techniques in the plan.
std::uint64_t noise_seed(std::uint64_t master, std::size_t log, double level, std::size_t rep);

/// The noisy UI log fed to every technique of one grid cell.
UILog noisy_log(const ExperimentPlan& plan, std::size_t log, double level, std::size_t rep);

/// Runs every (log, level, repetition, technique) cell. Level 0 runs once.
/// Rows are ordered by grid coordinates whatever the worker count; failures
/// are recorded in the row status and the run continues. When `timings` is
/// given it receives the measured runtime of every row in the same order.
std::vector<EvalRecord> run_experiment(const ExperimentPlan& plan,
                                       std::vector<std::int64_t>* timings = nullptr);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::size_t n = 0;    // successful rows
  std::size_t total = 0;
};

struct PlotRow {
  std::string technique;
  std::string clusterer;
  double noise_level = 0.0;
  MetricSummary summary;
};

/// Per-(technique, clusterer, level) summaries of one metric ("jc",
/// "fitness" or "empty_pct"); failed rows are excluded and counted in
/// coverage. Rows sorted by technique, clusterer, level.
std::vector<PlotRow> emit_plot_data(const std::vector<EvalRecord>& report, const std::string& metric);

/// Writes `technique,clusterer,noise_level,mean,stddev,n,coverage`.
void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows);

/// {"<technique>/<clusterer>": {"<level>": {jc: {mean, std}, fitness: {mean,
/// std}, empty_pct: {mean}, rows, ok_rows}}}, pooled over logs and repetitions.
nlohmann::ordered_json aggregate_json(const std::vector<EvalRecord>& report);

/// The same summaries per UI log: {"<log>": {...}}.
nlohmann::ordered_json per_log_aggregate_json(const std::vector<EvalRecord>& report);

}  // namespace routinelog
