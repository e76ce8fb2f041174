// Label-based Python interface: logs are lists of action labels, routine
// logs are lists of executions.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "routinelog/alignment.hpp"
#include "routinelog/encoding.hpp"
#include "routinelog/experiment.hpp"
#include "routinelog/generator.hpp"
#include "routinelog/io.hpp"
#include "routinelog/noise.hpp"
#include "routinelog/segmentation.hpp"

namespace py = pybind11;
using namespace routinelog;

namespace {

using Labels = std::vector<std::string>;
using Logs = std::vector<std::vector<Labels>>;

struct Context {
  ActionAlphabet alphabet;
  CompletionSet finals;
};

Context context(const Labels& log, const Labels& completion) {
  Context c;
  for (const auto& l : log) c.alphabet.intern(l);
  for (const auto& l : completion) c.alphabet.intern(l);
  c.finals = CompletionSet::from_labels(completion, c.alphabet);
  return c;
}

std::vector<Labels> to_labels(const ExecutionMultiset& w, const ActionAlphabet& a) {
  std::vector<Labels> out;
  for (const auto& e : w) out.push_back(a.to_labels(e.actions));
  return out;
}

Logs to_logs(const ClusterSet& cs, const ActionAlphabet& a) {
  Logs out;
  for (const auto& log : cs.logs) out.push_back(to_labels(log.executions, a));
  return out;
}

ClusterSet from_logs(const Logs& logs, ActionAlphabet& a) {
  ClusterSet cs;
  for (const auto& log : logs) {
    RoutineLog r;
    for (const auto& e : log) {
      RoutineExecution x;
      for (const auto& l : e) x.actions.push_back(a.intern(l));
      r.executions.push_back(std::move(x));
    }
    cs.logs.push_back(std::move(r));
  }
  return cs;
}

ClusteringConfig clustering(const std::string& method, std::size_t k, double eps, std::size_t min_pts,
                            std::size_t min_cluster_size, bool allow_single_cluster,
                            const std::string& noise_policy, std::uint64_t seed) {
  ClusteringConfig c;
  c.method = parse_cluster_method(method);
  c.k = k;
  c.eps = eps;
  c.min_pts = min_pts;
  c.min_cluster_size = min_cluster_size;
  c.allow_single_cluster = allow_single_cluster;
  c.noise_policy = parse_noise_policy(noise_policy);
  c.seed = seed;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_routinelog, m) {
  m.doc() = "Routine extraction from unsegmented UI logs";
  py::register_exception<Error>(m, "RoutineLogError", PyExc_ValueError);

  m.def(
      "segment",
      [](const Labels& log, const Labels& completion) {
        auto c = context(log, completion);
        UILog ui;
        for (const auto& l : log) ui.actions.push_back(c.alphabet.at(l));
        const auto seg = segment(ui, c.finals);
        return py::make_tuple(to_labels(seg.executions, c.alphabet), c.alphabet.to_labels(seg.remainder));
      },
      py::arg("log"), py::arg("completion"),
      "Cut a log after every completion action. Returns (executions, remainder).");

  m.def(
      "encode",
      [](const std::vector<Labels>& executions) {
        ActionAlphabet a;
        ExecutionMultiset w;
        for (const auto& e : executions) {
          RoutineExecution x;
          for (const auto& l : e) x.actions.push_back(a.intern(l));
          w.push_back(std::move(x));
        }
        const auto fm = encode(w, a);
        std::vector<std::vector<std::int64_t>> rows(fm.rows());
        for (std::size_t i = 0; i < fm.rows(); ++i) {
          for (std::size_t j = 0; j < fm.cols(); ++j) rows[i].push_back(fm.at(i, j));
        }
        return py::make_tuple(a.labels(), rows);
      },
      py::arg("executions"), "Count vectors of executions. Returns (alphabet, rows).");

  m.def(
      "extract",
      [](const Labels& log, const Labels& completion, const std::string& method, std::size_t k, double eps,
         std::size_t min_pts, std::size_t min_cluster_size, bool allow_single_cluster,
         const std::string& noise_policy, std::uint64_t seed) {
        auto c = context(log, completion);
        UILog ui;
        for (const auto& l : log) ui.actions.push_back(c.alphabet.at(l));
        const auto cfg =
            clustering(method, k, eps, min_pts, min_cluster_size, allow_single_cluster, noise_policy, seed);
        py::gil_scoped_release release;
        const auto r = run_pipeline(ui, c.finals, c.alphabet, cfg);
        py::gil_scoped_acquire acquire;
        return to_logs(r.clusters, c.alphabet);
      },
      py::arg("log"), py::arg("completion"), py::arg("method") = "kmeans", py::arg("k") = 0,
      py::arg("eps") = 0.5, py::arg("min_pts") = 5, py::arg("min_cluster_size") = 5,
      py::arg("allow_single_cluster") = false, py::arg("noise_policy") = "nearest_centroid",
      py::arg("seed") = 0, "Segment, encode and cluster a log into routine logs.");

  m.def(
      "inject_noise",
      [](const Labels& log, const Labels& completion, double level, std::uint64_t seed, bool preserve_finals) {
        auto c = context(log, completion);
        UILog ui;
        for (const auto& l : log) ui.actions.push_back(c.alphabet.at(l));
        NoiseConfig cfg;
        cfg.level = level;
        cfg.seed = seed;
        cfg.preserve_finals = preserve_finals;
        cfg.insert_pool = default_insert_pool(c.alphabet, c.finals);
        return c.alphabet.to_labels(inject_ui_log(ui, c.finals, cfg).actions);
      },
      py::arg("log"), py::arg("completion"), py::arg("level"), py::arg("seed") = 0,
      py::arg("preserve_finals") = true);

  m.def(
      "jaccard_coefficient",
      [](const Logs& logs, const std::map<std::string, Labels>& truth) {
        ActionAlphabet a;
        const auto cs = from_logs(logs, a);
        GroundTruthActionSets g;
        for (const auto& [name, labels] : truth) {
          g.names.push_back(name);
          ActionSet s;
          for (const auto& l : labels) s.insert(a.intern(l));
          g.sets.push_back(std::move(s));
        }
        return jaccard_coefficient(cs, g);
      },
      py::arg("routine_logs"), py::arg("truth"));

  m.def(
      "fitness",
      [](const Logs& logs, const std::vector<std::filesystem::path>& models) {
        ActionAlphabet a;
        const auto cs = from_logs(logs, a);
        std::vector<PetriNet> nets;
        for (const auto& p : models) nets.push_back(read_pnml(p));
        for (const auto& n : nets) {
          for (const auto& l : n.visible_labels()) a.intern(l);
        }
        py::gil_scoped_release release;
        return fitness(cs, ModelSet(nets, a)).value;
      },
      py::arg("routine_logs"), py::arg("models"), "Mean best log-model fitness against PNML models.");

  m.def(
      "alignment_cost",
      [](const std::filesystem::path& model, const Labels& trace) {
        const auto net = read_pnml(model);
        ActionAlphabet a;
        for (const auto& l : net.visible_labels()) a.intern(l);
        ActionSequence t;
        for (const auto& l : trace) t.push_back(a.intern(l));
        return Aligner(net, a).cost(t);
      },
      py::arg("model"), py::arg("trace"));

  m.def(
      "generate",
      [](std::size_t types, std::size_t executions_per_type, std::uint64_t playout_seed,
         std::uint64_t shuffle_seed, bool loops) {
        BenchmarkSpec spec;
        spec.types = builtin_routine_types(types, false, loops);
        spec.executions_per_type = executions_per_type;
        spec.playout_seed = playout_seed;
        spec.shuffle_seed = shuffle_seed;
        const auto b = build_ui_log(spec);
        py::dict out;
        out["log"] = b.alphabet.to_labels(b.log.actions);
        Labels completion;
        for (Action x : b.completion.members()) completion.push_back(b.alphabet.label(x));
        out["completion"] = completion;
        py::dict truth;
        for (std::size_t i = 0; i < b.truth.size(); ++i) {
          Labels s;
          for (Action x : b.truth.sets[i]) s.push_back(b.alphabet.label(x));
          truth[py::str(b.truth.names[i])] = s;
        }
        out["truth"] = truth;
        out["case_ids"] = b.case_ids;
        return out;
      },
      py::arg("types") = 3, py::arg("executions_per_type") = 50, py::arg("playout_seed") = 1,
      py::arg("shuffle_seed") = 2, py::arg("loops") = true,
      "Synthetic UI log with its completion labels and per-type action sets.");
}
