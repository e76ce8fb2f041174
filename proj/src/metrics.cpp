#include "routinelog/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "routinelog/encoding.hpp"

namespace routinelog {

void GroundTruthActionSets::validate(std::size_t alphabet_size) const {
  if (sets.empty()) throw Error("at least one reference action set is required");
  if (!names.empty() && names.size() != sets.size()) {
    throw Error("action set names and sets differ in count");
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].empty()) throw Error("reference action set " + std::to_string(i) + " is empty");
    for (Action a : sets[i]) {
      if (a >= alphabet_size) throw Error("reference action set uses an unknown action");
    }
  }
}

ModelSet::ModelSet(std::vector<PetriNet> nets, const ActionAlphabet& alphabet,
                   AlignerOptions options) {
  if (nets.empty()) throw Error("model set must contain at least one net");
  for (auto& n : nets) aligners_.push_back(std::make_unique<Aligner>(n, alphabet, options));
}

ActionSet action_set(const RoutineLog& log) {
  ActionSet out;
  for (const auto& e : log.executions) out.insert(e.actions.begin(), e.actions.end());
  return out;
}

double jaccard(const ActionSet& a, const ActionSet& b) {
  std::size_t inter = 0;
  for (Action x : a) inter += b.contains(x) ? 1 : 0;
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double jaccard_coefficient(const ClusterSet& clusters, const GroundTruthActionSets& truth) {
  if (truth.sets.empty()) throw Error("ground-truth action sets must be nonempty");
  if (clusters.logs.empty()) throw Error("jaccard coefficient needs at least one cluster");
  double sum = 0.0;
  for (const auto& log : clusters.logs) {
    const auto actions = action_set(log);
    double best = 0.0;
    for (const auto& g : truth.sets) best = std::max(best, jaccard(actions, g));
    sum += best;
  }
  return sum / static_cast<double>(clusters.logs.size());
}

FitnessResult fitness(const ClusterSet& clusters, const ModelSet& models) {
  FitnessResult r;
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& log : clusters.logs) {
    if (log.empty()) {
      ++r.excluded;
      continue;
    }
    double best = 0.0;
    for (std::size_t m = 0; m < models.size() && best < 1.0; ++m) {
      best = std::max(best, models.aligner(m).fitness(log));
    }
    sum += best;
    ++counted;
  }
  if (counted == 0) throw Error("fitness is undefined when every routine log is empty");
  r.value = sum / static_cast<double>(counted);
  return r;
}

double empty_log_pct(const ClusterSet& clusters) {
  if (clusters.logs.empty()) throw Error("empty-log percentage needs at least one cluster");
  return 100.0 * static_cast<double>(clusters.empty_count()) /
         static_cast<double>(clusters.logs.size());
}

std::vector<double> binary_vector(const ActionSet& set, std::size_t dims) {
  std::vector<double> v(dims, 0.0);
  for (Action a : set) {
    if (a >= dims) throw Error("action set uses an action outside the alphabet");
    v[a] = 1.0;
  }
  return v;
}

ClusterSet baseline_assign(const ExecutionMultiset& executions,
                           const GroundTruthActionSets& action_sets,
                           const ActionAlphabet& alphabet) {
  action_sets.validate(alphabet.size());
  const std::size_t dims = alphabet.size();
  std::vector<std::vector<double>> targets;
  for (const auto& s : action_sets.sets) targets.push_back(binary_vector(s, dims));

  std::vector<std::size_t> labels;
  labels.reserve(executions.size());
  for (const auto& e : executions) {
    const auto counts = count_vector(e.actions, dims);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_type = 0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      double d = 0.0;
      for (std::size_t i = 0; i < dims; ++i) {
        const double diff = static_cast<double>(counts[i]) - targets[t][i];
        d += diff * diff;
      }
      if (d < best) {
        best = d;
        best_type = t;
      }
    }
    labels.push_back(best_type);
  }
  return make_cluster_set(labels, executions, targets.size());
}

}  // namespace routinelog
