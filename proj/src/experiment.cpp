#include "routinelog/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <ostream>
#include <thread>

#include "routinelog/encoding.hpp"
#include "routinelog/io.hpp"

namespace routinelog {

PipelineResult run_pipeline(const UILog& log, const CompletionSet& finals,
                            const ActionAlphabet& alphabet, const ClusteringConfig& config) {
  PipelineResult r;
  r.segmentation = segment(log, finals);
  if (r.segmentation.executions.empty()) return r;
  const auto matrix = encode(r.segmentation.executions, alphabet);
  r.labeling = cluster(matrix, config);
  r.clusters = to_cluster_set(r.labeling, r.segmentation.executions);
  return r;
}

Technique Technique::extraction(ClusteringConfig c) {
  Technique t;
  t.kind = Kind::extraction;
  t.clustering = c;
  return t;
}

Technique Technique::baseline(std::string name,
                              std::vector<std::pair<std::string, std::vector<std::string>>> sets) {
  Technique t;
  t.kind = Kind::baseline;
  t.baseline_name = std::move(name);
  t.action_sets = std::move(sets);
  return t;
}

std::string Technique::technique_name() const {
  return kind == Kind::extraction ? "ours" : "baseline:" + baseline_name;
}

std::string Technique::clusterer_name() const {
  return kind == Kind::extraction ? std::string(to_string(clustering.method)) : "nearest_vector";
}

void ExperimentPlan::validate() const {
  if (logs.empty()) throw Error("experiment plan has no logs");
  if (techniques.empty()) throw Error("experiment plan has no techniques");
  if (noise_levels.empty()) throw Error("experiment plan has no noise levels");
  if (repetitions == 0) throw Error("repetitions must be >= 1");
  for (double l : noise_levels) {
    if (!(l >= 0.0 && l <= 1.0)) throw Error("noise levels must lie in [0, 1]");
  }
  for (const auto& t : techniques) {
    if (t.kind == Technique::Kind::baseline && t.action_sets.empty()) {
      throw Error("baseline '" + t.baseline_name + "' has no action sets");
    }
  }
}

std::uint64_t noise_seed(std::uint64_t master, std::size_t log, double level, std::size_t rep) {
  return derive_seed(master, {log, std::bit_cast<std::uint64_t>(level), rep});
}

UILog noisy_log(const ExperimentPlan& plan, std::size_t log, double level, std::size_t rep) {
  const auto& in = plan.logs.at(log);
  if (level == 0.0) return in.log;
  NoiseConfig cfg;
  cfg.level = level;
  cfg.seed = noise_seed(plan.master_seed, log, level, rep);
  cfg.insert_pool = default_insert_pool(in.alphabet, in.completion, plan.insert_pool_includes_finals);
  cfg.preserve_finals = plan.preserve_finals;
  return inject_ui_log(in.log, in.completion, cfg);
}

namespace {

struct Cell {
  std::size_t log;
  double level;
  std::size_t rep;
};

GroundTruthActionSets resolve_sets(const Technique& t, const ActionAlphabet& alphabet) {
  GroundTruthActionSets sets;
  for (const auto& [name, labels] : t.action_sets) {
    ActionSet s;
    for (const auto& l : labels) {
      auto a = alphabet.find(l);
      if (!a) throw Error("baseline '" + t.baseline_name + "' uses unknown label '" + l + "'");
      s.insert(*a);
    }
    sets.names.push_back(name);
    sets.sets.push_back(std::move(s));
  }
  sets.validate(alphabet.size());
  return sets;
}

EvalRecord evaluate_cell(const ExperimentPlan& plan, const Cell& cell, const UILog& noisy,
                         const Technique& tech, const ModelSet* models,
                         const std::string& model_error, std::int64_t& elapsed_ms) {
  const auto& in = plan.logs[cell.log];
  EvalRecord r;
  r.log = in.name;
  r.technique = tech.technique_name();
  r.clusterer = tech.clusterer_name();
  r.noise_level = cell.level;
  r.repetition = cell.rep;
  r.jc = r.fitness = r.empty_pct = std::nan("");
  try {
    if (!models) throw Error(model_error);
    const auto start = std::chrono::steady_clock::now();
    ClusterSet clusters;
    if (tech.kind == Technique::Kind::extraction) {
      auto cfg = tech.clustering;
      if (cfg.k == 0) cfg.k = models->size();
      cfg.seed = derive_seed(plan.master_seed, {cell.log, std::bit_cast<std::uint64_t>(cell.level),
                                                cell.rep, 0xC1u});
      clusters = run_pipeline(noisy, in.completion, in.alphabet, cfg).clusters;
    } else {
      const auto seg = segment(noisy, in.completion);
      clusters = baseline_assign(seg.executions, resolve_sets(tech, in.alphabet), in.alphabet);
    }
    elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
    if (plan.record_runtime) r.runtime_ms = elapsed_ms;
    r.n_clusters = clusters.size();
    if (clusters.size() == 0) throw Error("no routine executions extracted");
    r.jc = jaccard_coefficient(clusters, in.truth);
    r.empty_pct = empty_log_pct(clusters);
    r.fitness = fitness(clusters, *models).value;
  } catch (const std::exception& e) {
    r.status = std::string("error: ") + e.what();
  }
  return r;
}

}  // namespace

std::vector<EvalRecord> run_experiment(const ExperimentPlan& plan,
                                       std::vector<std::int64_t>* timings) {
  plan.validate();

  std::vector<std::unique_ptr<ModelSet>> models(plan.logs.size());
  std::vector<std::string> model_errors(plan.logs.size());
  for (std::size_t l = 0; l < plan.logs.size(); ++l) {
    try {
      models[l] = std::make_unique<ModelSet>(plan.logs[l].models, plan.logs[l].alphabet);
    } catch (const std::exception& e) {
      model_errors[l] = std::string("ground-truth models unusable: ") + e.what();
    }
  }

  std::vector<Cell> cells;
  for (std::size_t l = 0; l < plan.logs.size(); ++l) {
    for (double level : plan.noise_levels) {
      const std::size_t reps = level == 0.0 ? 1 : plan.repetitions;
      for (std::size_t r = 0; r < reps; ++r) cells.push_back({l, level, r});
    }
  }

  const std::size_t n_tech = plan.techniques.size();
  std::vector<EvalRecord> rows(cells.size() * n_tech);
  std::vector<std::int64_t> times(rows.size(), 0);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      const auto& cell = cells[c];
      std::optional<UILog> noisy;
      std::string noise_error;
      try {
        noisy = noisy_log(plan, cell.log, cell.level, cell.rep);
      } catch (const std::exception& e) {
        noise_error = std::string("noise injection failed: ") + e.what();
      }
      for (std::size_t t = 0; t < n_tech; ++t) {
        const auto idx = c * n_tech + t;
        if (!noisy) {
          rows[idx] = evaluate_cell(plan, cell, UILog{}, plan.techniques[t], nullptr, noise_error,
                                    times[idx]);
          continue;
        }
        rows[idx] = evaluate_cell(plan, cell, *noisy, plan.techniques[t], models[cell.log].get(),
                                  model_errors[cell.log], times[idx]);
      }
    }
  };

  const std::size_t n_workers = std::max<std::size_t>(1, std::min(plan.workers, cells.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (timings) *timings = std::move(times);
  return rows;
}

// ------------------------------------------------------------ aggregation

namespace {

std::optional<double> metric_of(const EvalRecord& r, const std::string& metric) {
  if (!r.ok()) return std::nullopt;
  if (metric == "jc") return r.jc;
  if (metric == "fitness") return r.fitness;
  if (metric == "empty_pct") return r.empty_pct;
  throw Error("unknown metric '" + metric + "'");
}

MetricSummary summarize(const std::vector<double>& values, std::size_t total) {
  MetricSummary s;
  s.total = total;
  s.n = values.size();
  if (values.empty()) {
    s.mean = s.stddev = std::nan("");
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

using GroupKey = std::tuple<std::string, std::string, double>;

std::map<GroupKey, std::pair<std::vector<double>, std::size_t>> group(
    const std::vector<EvalRecord>& report, const std::string& metric,
    const std::string* only_log = nullptr) {
  std::map<GroupKey, std::pair<std::vector<double>, std::size_t>> groups;
  for (const auto& r : report) {
    if (only_log && r.log != *only_log) continue;
    auto& g = groups[{r.technique, r.clusterer, r.noise_level}];
    ++g.second;
    if (auto v = metric_of(r, metric)) g.first.push_back(*v);
  }
  return groups;
}

nlohmann::ordered_json summaries_json(const std::vector<EvalRecord>& report,
                                      const std::string* only_log) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  const auto jc = group(report, "jc", only_log);
  const auto fit = group(report, "fitness", only_log);
  const auto empty = group(report, "empty_pct", only_log);
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  for (const auto& [key, values] : jc) {
    const auto& [tech, clus, level] = key;
    const auto j = summarize(values.first, values.second);
    const auto f = summarize(fit.at(key).first, fit.at(key).second);
    const auto e = summarize(empty.at(key).first, empty.at(key).second);
    nlohmann::ordered_json cell;
    cell["jc"] = {{"mean", num(j.mean)}, {"std", num(j.stddev)}};
    cell["fitness"] = {{"mean", num(f.mean)}, {"std", num(f.stddev)}};
    cell["empty_pct"] = {{"mean", num(e.mean)}};
    cell["rows"] = values.second;
    cell["ok_rows"] = j.n;
    out[tech + "/" + clus][format_double(level)] = std::move(cell);
  }
  return out;
}

}  // namespace

std::vector<PlotRow> emit_plot_data(const std::vector<EvalRecord>& report,
                                    const std::string& metric) {
  if (report.empty()) throw Error("report is empty");
  std::vector<PlotRow> out;
  for (const auto& [key, values] : group(report, metric)) {
    const auto& [tech, clus, level] = key;
    out.push_back({tech, clus, level, summarize(values.first, values.second)});
  }
  return out;
}

void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows) {
  out << "technique,clusterer,noise_level,mean,stddev,n,coverage\n";
  for (const auto& r : rows) {
    const double coverage =
        r.summary.total == 0 ? 0.0
                             : static_cast<double>(r.summary.n) / static_cast<double>(r.summary.total);
    write_csv_row(out, std::vector<std::string>{r.technique, r.clusterer,
                                                format_double(r.noise_level),
                                                format_double(r.summary.mean),
                                                format_double(r.summary.stddev),
                                                std::to_string(r.summary.n),
                                                format_double(coverage)});
  }
}

nlohmann::ordered_json aggregate_json(const std::vector<EvalRecord>& report) {
  return summaries_json(report, nullptr);
}

nlohmann::ordered_json per_log_aggregate_json(const std::vector<EvalRecord>& report) {
  std::vector<std::string> logs;
  for (const auto& r : report) {
    if (std::find(logs.begin(), logs.end(), r.log) == logs.end()) logs.push_back(r.log);
  }
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& l : logs) out[l] = summaries_json(report, &l);
  return out;
}

}  // namespace routinelog
