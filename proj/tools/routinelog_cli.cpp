// routinelog: command-line front end for routine-log extraction and the
// noise-sweep evaluation grid.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "routinelog/encoding.hpp"
#include "routinelog/experiment.hpp"
#include "routinelog/generator.hpp"
#include "routinelog/io.hpp"

namespace fs = std::filesystem;
using namespace routinelog;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kInvalid = 2;

json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

void write_json(const fs::path& p, const json& doc) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << doc.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

// Completion labels come from --completion, else from a benchmark manifest.
struct CompletionArgs {
  std::vector<std::string> labels;
  std::string manifest;
};

void add_completion(CLI::App* sub, CompletionArgs& c) {
  sub->add_option("--completion", c.labels, "Completion action labels")->delimiter(',');
  sub->add_option("--manifest", c.manifest, "Benchmark manifest providing completion labels");
}

CompletionSet resolve_completion(const CompletionArgs& c, ActionAlphabet& alphabet) {
  std::vector<std::string> labels = c.labels;
  if (labels.empty() && !c.manifest.empty()) {
    const auto manifest = read_json(c.manifest);
    for (const auto& l : manifest.at("completion")) labels.push_back(l.get<std::string>());
  }
  if (labels.empty()) throw Error("no completion labels given (use --completion or --manifest)");
  for (const auto& l : labels) alphabet.intern(l);
  return CompletionSet::from_labels(labels, alphabet);
}

ExperimentLog load_benchmark(const fs::path& dir) {
  const auto manifest = read_json(dir / "manifest.json");
  ExperimentLog log;
  log.name = manifest.value("name", dir.filename().string());
  auto data = read_ui_log(dir / manifest.value("ui_log", "ui_log.csv"));
  log.log = std::move(data.log);
  log.alphabet = std::move(data.alphabet);
  for (const auto& m : manifest.at("models")) {
    log.models.push_back(read_pnml(dir / m.at("file").get<std::string>()));
    for (const auto& l : log.models.back().visible_labels()) log.alphabet.intern(l);
  }
  std::vector<std::string> finals;
  for (const auto& l : manifest.at("completion")) finals.push_back(l.get<std::string>());
  for (const auto& l : finals) log.alphabet.intern(l);
  log.completion = CompletionSet::from_labels(finals, log.alphabet);
  log.truth = read_action_sets(dir / manifest.value("action_sets", "action_sets.json"), log.alphabet);
  return log;
}

std::vector<std::pair<std::string, std::vector<std::string>>> read_label_sets(const fs::path& p) {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  const auto doc = read_json(p);
  if (!doc.is_object()) throw Error(p.string() + ": action-set file must be a JSON object");
  for (const auto& [name, labels] : doc.items()) {
    std::vector<std::string> ls;
    for (const auto& l : labels) ls.push_back(l.get<std::string>());
    out.emplace_back(name, std::move(ls));
  }
  return out;
}

struct ClusterArgs {
  std::string method = "kmeans";
  std::size_t k = 0;
  double eps = 0.5;
  std::size_t min_pts = 5;
  std::size_t min_cluster_size = 5;
  bool allow_single_cluster = false;
  std::string noise_policy = "nearest_centroid";
  std::size_t n_init = 10;
  std::size_t max_iter = 300;

  ClusteringConfig config(std::string_view method_name) const {
    ClusteringConfig c;
    c.method = parse_cluster_method(method_name);
    c.k = k;
    c.eps = eps;
    c.min_pts = min_pts;
    c.min_cluster_size = min_cluster_size;
    c.allow_single_cluster = allow_single_cluster;
    c.noise_policy = parse_noise_policy(noise_policy);
    c.n_init = n_init;
    c.max_iter = max_iter;
    return c;
  }
};

void add_cluster_options(CLI::App* sub, ClusterArgs& a, bool single_method) {
  if (single_method) {
    sub->add_option("--method", a.method, "kmeans | dbscan | hdbscan");
  }
  sub->add_option("--k", a.k, "K-Means cluster count (0: number of ground-truth models)");
  sub->add_option("--eps", a.eps, "DBSCAN neighbourhood radius");
  sub->add_option("--min-pts", a.min_pts, "DBSCAN core-point threshold");
  sub->add_option("--min-cluster-size", a.min_cluster_size, "HDBSCAN minimum cluster size");
  sub->add_flag("--allow-single-cluster", a.allow_single_cluster, "HDBSCAN may return one cluster");
  sub->add_option("--noise-policy", a.noise_policy, "nearest_centroid | own_cluster");
  sub->add_option("--n-init", a.n_init, "K-Means restarts");
  sub->add_option("--max-iter", a.max_iter, "K-Means iteration cap");
}

// ------------------------------------------------------------- subcommands

struct GenerateArgs {
  std::size_t types = 3;
  std::size_t executions = 50;
  std::uint64_t playout_seed = 1;
  std::uint64_t shuffle_seed = 2;
  std::size_t max_len = 1000;
  bool shared_prefix = false;
  bool no_loops = false;
  std::string name = "benchmark";
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  BenchmarkSpec spec;
  spec.types = builtin_routine_types(a.types, a.shared_prefix, !a.no_loops);
  spec.executions_per_type = a.executions;
  spec.playout_seed = a.playout_seed;
  spec.shuffle_seed = a.shuffle_seed;
  spec.max_len = a.max_len;
  const auto b = build_ui_log(spec);

  const fs::path dir(a.out);
  fs::create_directories(dir / "models");
  write_ui_log(dir / "ui_log.csv", b.log, b.alphabet, b.case_ids);
  {
    auto out = open_out(dir / "action_sets.json");
    write_action_sets(out, b.truth, b.alphabet);
  }
  json manifest;
  manifest["name"] = a.name;
  manifest["ui_log"] = "ui_log.csv";
  manifest["action_sets"] = "action_sets.json";
  manifest["completion"] = json::array();
  for (const auto& t : spec.types) manifest["completion"].push_back(t.completion_label);
  manifest["models"] = json::array();
  for (const auto& m : b.models) {
    const auto file = "models/" + m.name + ".pnml";
    write_pnml(dir / file, m);
    manifest["models"].push_back({{"name", m.name}, {"file", file}});
  }
  manifest["executions_per_type"] = a.executions;
  manifest["playout_seed"] = a.playout_seed;
  manifest["shuffle_seed"] = a.shuffle_seed;
  manifest["n_actions"] = b.log.size();
  manifest["n_executions"] = b.executions.size();
  write_json(dir / "manifest.json", manifest);
  std::cerr << "generated " << b.executions.size() << " executions, " << b.log.size()
            << " actions in " << dir.string() << "\n";
  return kOk;
}

struct NoiseArgs {
  std::string input;
  std::string output;
  CompletionArgs completion;
  double level = 0.0;
  std::uint64_t seed = 0;
  bool preserve_finals = true;
  bool pool_includes_finals = false;
};

int cmd_inject_noise(const NoiseArgs& a) {
  auto data = read_ui_log(a.input);
  const auto finals = resolve_completion(a.completion, data.alphabet);
  NoiseConfig cfg;
  cfg.level = a.level;
  cfg.seed = a.seed;
  cfg.preserve_finals = a.preserve_finals;
  cfg.insert_pool = default_insert_pool(data.alphabet, finals, a.pool_includes_finals);
  const auto noisy = inject_ui_log(data.log, finals, cfg);
  if (a.output.empty()) {
    write_ui_log(std::cout, noisy, data.alphabet);
  } else {
    write_ui_log(fs::path(a.output), noisy, data.alphabet);
  }
  return kOk;
}

struct SegmentArgs {
  std::string input;
  std::string output;
  CompletionArgs completion;
};

int cmd_segment(const SegmentArgs& a) {
  auto data = read_ui_log(a.input);
  const auto finals = resolve_completion(a.completion, data.alphabet);
  const auto seg = segment(data.log, finals);
  if (seg.no_completion_found) std::cerr << "warning: no completion action found\n";
  if (a.output.empty()) {
    write_executions(std::cout, seg.executions, data.alphabet);
  } else {
    auto out = open_out(a.output);
    write_executions(out, seg.executions, data.alphabet);
  }
  std::cerr << seg.executions.size() << " executions, remainder of " << seg.remainder.size()
            << " actions\n";
  return kOk;
}

struct ExtractArgs {
  std::string input;
  std::string out;
  CompletionArgs completion;
  ClusterArgs clustering;
  std::uint64_t seed = 0;
  bool xes = false;
  std::string features;
};

int cmd_extract(const ExtractArgs& a) {
  auto data = read_ui_log(a.input);
  const auto finals = resolve_completion(a.completion, data.alphabet);
  auto cfg = a.clustering.config(a.clustering.method);
  cfg.seed = a.seed;
  if (cfg.method == ClusterMethod::kmeans && cfg.k == 0 && !a.completion.manifest.empty()) {
    cfg.k = read_json(a.completion.manifest).at("models").size();
  }
  const auto result = run_pipeline(data.log, finals, data.alphabet, cfg);
  if (result.segmentation.executions.empty()) {
    std::cerr << "warning: no routine executions found; zero clusters\n";
  }
  if (!a.features.empty()) {
    auto out = open_out(a.features);
    write_matrix_csv(out, encode(result.segmentation.executions, data.alphabet), data.alphabet);
  }
  write_routine_logs(result.clusters, data.alphabet, a.out, {a.xes});
  std::cerr << result.clusters.size() << " routine logs (" << result.clusters.empty_count()
            << " empty) written to " << a.out << "\n";
  return kOk;
}

struct AssignArgs {
  std::string input;
  std::string out;
  std::string action_sets;
  CompletionArgs completion;
  bool xes = false;
};

int cmd_assign(const AssignArgs& a) {
  auto data = read_ui_log(a.input);
  const auto finals = resolve_completion(a.completion, data.alphabet);
  for (const auto& [name, labels] : read_label_sets(a.action_sets)) {
    for (const auto& l : labels) data.alphabet.intern(l);
  }
  const auto sets = read_action_sets(fs::path(a.action_sets), data.alphabet);
  const auto seg = segment(data.log, finals);
  const auto clusters = baseline_assign(seg.executions, sets, data.alphabet);
  write_routine_logs(clusters, data.alphabet, a.out, {a.xes});
  std::cerr << clusters.size() << " routine logs (" << clusters.empty_count()
            << " empty) written to " << a.out << "\n";
  return kOk;
}

struct EvaluateArgs {
  std::string routine_logs;
  std::string truth;
  std::vector<std::string> models;
  std::string manifest;
};

int cmd_evaluate(const EvaluateArgs& a) {
  std::vector<std::string> model_files = a.models;
  std::string truth_file = a.truth;
  if (!a.manifest.empty()) {
    const fs::path mpath(a.manifest);
    const auto m = read_json(mpath);
    if (model_files.empty()) {
      for (const auto& e : m.at("models")) {
        model_files.push_back((mpath.parent_path() / e.at("file").get<std::string>()).string());
      }
    }
    if (truth_file.empty()) {
      truth_file = (mpath.parent_path() / m.value("action_sets", "action_sets.json")).string();
    }
  }
  if (model_files.empty()) throw Error("no ground-truth models given (use --models or --manifest)");
  if (truth_file.empty()) throw Error("no ground-truth action sets given (use --truth or --manifest)");

  ActionAlphabet alphabet;
  std::vector<PetriNet> nets;
  for (const auto& f : model_files) {
    nets.push_back(read_pnml(fs::path(f)));
    for (const auto& l : nets.back().visible_labels()) alphabet.intern(l);
  }
  for (const auto& [name, labels] : read_label_sets(truth_file)) {
    for (const auto& l : labels) alphabet.intern(l);
  }
  const auto clusters = read_routine_logs(a.routine_logs, alphabet);
  const auto truth = read_action_sets(fs::path(truth_file), alphabet);
  const ModelSet models(std::move(nets), alphabet);

  json doc;
  doc["n_clusters"] = clusters.size();
  doc["jc"] = jaccard_coefficient(clusters, truth);
  doc["empty_pct"] = empty_log_pct(clusters);
  if (clusters.size() > clusters.empty_count()) {
    const auto f = fitness(clusters, models);
    doc["fitness"] = f.value;
    doc["excluded_empty_logs"] = f.excluded;
  } else {
    doc["fitness"] = nullptr;
    doc["excluded_empty_logs"] = clusters.size();
  }
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

struct ExperimentArgs {
  std::vector<std::string> benchmarks;
  GenerateArgs generate;
  std::vector<double> levels{0.0, 0.1, 0.2, 0.3, 0.4};
  std::size_t repetitions = 10;
  std::vector<std::string> methods{"kmeans", "dbscan", "hdbscan"};
  ClusterArgs clustering;
  std::vector<std::string> baselines;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool preserve_finals = true;
  bool pool_includes_finals = false;
  bool record_runtime = false;
  std::string out;
};

void write_plots(const std::vector<EvalRecord>& report, const fs::path& dir) {
  for (const char* metric : {"jc", "fitness", "empty_pct"}) {
    auto out = open_out(dir / (std::string("plot_") + metric + ".csv"));
    write_plot_csv(out, emit_plot_data(report, metric));
  }
}

int cmd_experiment(const ExperimentArgs& a) {
  ExperimentPlan plan;
  try {
    if (a.benchmarks.empty()) {
      const auto tmp = fs::path(a.out) / "benchmark";
      GenerateArgs g = a.generate;
      g.out = tmp.string();
      cmd_generate(g);
      plan.logs.push_back(load_benchmark(tmp));
    } else {
      for (const auto& b : a.benchmarks) plan.logs.push_back(load_benchmark(b));
    }
    plan.noise_levels = a.levels;
    plan.repetitions = a.repetitions;
    for (const auto& m : a.methods) {
      plan.techniques.push_back(Technique::extraction(a.clustering.config(m)));
    }
    for (const auto& spec : a.baselines) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) throw Error("--baseline expects name=path, got '" + spec + "'");
      plan.techniques.push_back(
          Technique::baseline(spec.substr(0, eq), read_label_sets(spec.substr(eq + 1))));
    }
    plan.master_seed = a.seed;
    plan.workers = a.workers;
    plan.preserve_finals = a.preserve_finals;
    plan.insert_pool_includes_finals = a.pool_includes_finals;
    plan.record_runtime = a.record_runtime;
    plan.validate();
  } catch (const std::exception& e) {
    std::cerr << "invalid plan: " << e.what() << "\n";
    return kInvalid;
  }

  std::vector<std::int64_t> timings;
  const auto report = run_experiment(plan, &timings);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "report.csv");
    write_report(out, report);
  }
  {
    auto out = open_out(dir / "timings.csv");
    out << "row,log,technique,clusterer,noise_level,repetition,runtime_ms\n";
    for (std::size_t i = 0; i < report.size(); ++i) {
      const auto& r = report[i];
      write_csv_row(out, std::vector<std::string>{std::to_string(i), r.log, r.technique, r.clusterer,
                                                  format_double(r.noise_level),
                                                  std::to_string(r.repetition),
                                                  std::to_string(timings[i])});
    }
  }
  write_json(dir / "aggregate.json", aggregate_json(report));
  write_json(dir / "aggregate_per_log.json", per_log_aggregate_json(report));
  write_plots(report, dir);

  std::size_t failed = 0;
  for (const auto& r : report) failed += r.ok() ? 0 : 1;
  std::cerr << report.size() << " rows, " << failed << " failed; results in " << dir.string() << "\n";
  return failed == 0 ? kOk : kPartial;
}

struct PlotArgs {
  std::string report;
  std::string metric = "all";
  std::string out = ".";
};

int cmd_plot_data(const PlotArgs& a) {
  std::ifstream in(a.report);
  if (!in) throw Error("cannot open " + a.report);
  const auto report = read_report(in);
  if (a.metric == "all") {
    write_plots(report, a.out);
  } else {
    auto out = open_out(fs::path(a.out) / ("plot_" + a.metric + ".csv"));
    write_plot_csv(out, emit_plot_data(report, a.metric));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Routine-log extraction from unsegmented UI logs"};
  app.set_config("--config", "", "TOML/INI configuration file; command-line flags take precedence");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a synthetic benchmark UI log");
  g->add_option("--types", gen.types, "Number of routine types");
  g->add_option("--executions-per-type", gen.executions, "Executions per routine type");
  g->add_option("--playout-seed", gen.playout_seed, "Seed of the playouts");
  g->add_option("--shuffle-seed", gen.shuffle_seed, "Seed of the execution order");
  g->add_option("--max-len", gen.max_len, "Playout length cap");
  g->add_flag("--shared-prefix", gen.shared_prefix, "All types start with a shared action");
  g->add_flag("--no-loops", gen.no_loops, "Do not use the looping routine shape");
  g->add_option("--name", gen.name, "Benchmark name");
  g->add_option("--out", gen.out, "Output directory")->required();

  NoiseArgs noise;
  auto* n = app.add_subcommand("inject-noise", "Apply skip/insert noise to a UI log");
  n->add_option("--input", noise.input, "UI log CSV")->required()->check(CLI::ExistingFile);
  n->add_option("--output", noise.output, "Output CSV (stdout when omitted)");
  add_completion(n, noise.completion);
  n->add_option("--noise-level", noise.level, "Noise level l")->check(CLI::Range(0.0, 1.0));
  n->add_option("--seed", noise.seed, "Noise seed");
  n->add_flag("--preserve-finals,!--no-preserve-finals", noise.preserve_finals,
              "Keep each execution's completion action");
  n->add_flag("--insert-pool-includes-finals", noise.pool_includes_finals,
              "Allow completion actions to be inserted");

  SegmentArgs seg;
  auto* s = app.add_subcommand("segment", "Split a UI log into routine executions");
  s->add_option("--input", seg.input, "UI log CSV")->required()->check(CLI::ExistingFile);
  s->add_option("--output", seg.output, "Executions CSV (stdout when omitted)");
  add_completion(s, seg.completion);

  ExtractArgs ex;
  auto* e = app.add_subcommand("extract", "Extract routine logs by clustering executions");
  e->add_option("--input", ex.input, "UI log CSV")->required()->check(CLI::ExistingFile);
  e->add_option("--out", ex.out, "Output directory")->required();
  add_completion(e, ex.completion);
  add_cluster_options(e, ex.clustering, true);
  e->add_option("--seed", ex.seed, "Clustering seed");
  e->add_flag("--xes", ex.xes, "Also write XES files");
  e->add_option("--features", ex.features, "Write the count-vector matrix to this CSV");

  AssignArgs as;
  auto* b = app.add_subcommand("assign", "Assign executions to types given per-type action sets");
  b->add_option("--input", as.input, "UI log CSV")->required()->check(CLI::ExistingFile);
  b->add_option("--out", as.out, "Output directory")->required();
  b->add_option("--action-sets", as.action_sets, "JSON {type: [labels]}")->required()->check(CLI::ExistingFile);
  add_completion(b, as.completion);
  b->add_flag("--xes", as.xes, "Also write XES files");

  EvaluateArgs ev;
  auto* v = app.add_subcommand("evaluate", "Score routine logs against ground truth");
  v->add_option("--routine-logs", ev.routine_logs, "Directory written by extract/assign")
      ->required()
      ->check(CLI::ExistingDirectory);
  v->add_option("--truth", ev.truth, "Ground-truth action sets JSON");
  v->add_option("--models", ev.models, "Ground-truth PNML files")->delimiter(',');
  v->add_option("--manifest", ev.manifest, "Benchmark manifest (models and action sets)");

  ExperimentArgs xp;
  auto* x = app.add_subcommand("experiment", "Run the noise-sweep evaluation grid");
  x->add_option("--benchmark", xp.benchmarks, "Benchmark directory (repeatable); generated when omitted");
  x->add_option("--types", xp.generate.types, "Routine types of a generated benchmark");
  x->add_option("--executions-per-type", xp.generate.executions, "Executions per type of a generated benchmark");
  x->add_option("--playout-seed", xp.generate.playout_seed, "Playout seed of a generated benchmark");
  x->add_option("--shuffle-seed", xp.generate.shuffle_seed, "Shuffle seed of a generated benchmark");
  x->add_option("--levels", xp.levels, "Noise levels")->delimiter(',');
  x->add_option("--repetitions", xp.repetitions, "Repetitions per nonzero level");
  x->add_option("--methods", xp.methods, "Clusterers for our technique")->delimiter(',');
  add_cluster_options(x, xp.clustering, false);
  x->add_option("--baseline", xp.baselines, "Baseline action sets as name=path (repeatable)");
  x->add_option("--seed", xp.seed, "Master seed");
  x->add_option("--workers", xp.workers, "Worker threads")->check(CLI::PositiveNumber);
  x->add_flag("--preserve-finals,!--no-preserve-finals", xp.preserve_finals,
              "Keep each execution's completion action under noise");
  x->add_flag("--insert-pool-includes-finals", xp.pool_includes_finals,
              "Allow completion actions to be inserted");
  x->add_flag("--record-runtime", xp.record_runtime, "Write measured runtimes into report.csv");
  x->add_option("--out", xp.out, "Output directory")->required();

  PlotArgs pl;
  auto* p = app.add_subcommand("plot-data", "Summarize a report per technique and noise level");
  p->add_option("--report", pl.report, "report.csv")->required()->check(CLI::ExistingFile);
  p->add_option("--metric", pl.metric, "jc | fitness | empty_pct | all");
  p->add_option("--out", pl.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*n) return cmd_inject_noise(noise);
    if (*s) return cmd_segment(seg);
    if (*e) return cmd_extract(ex);
    if (*b) return cmd_assign(as);
    if (*v) return cmd_evaluate(ev);
    if (*x) return cmd_experiment(xp);
    if (*p) return cmd_plot_data(pl);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
