#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "routinelog/alignment.hpp"
#include "routinelog/core.hpp"
#include "routinelog/petri_net.hpp"

namespace routinelog {

using ActionSet = std::set<Action>;

/// Named reference action sets: ground truth G_1..G_n for the Jaccard
/// Coefficient, or the per-type action sets S_i a baseline discovered.
struct GroundTruthActionSets {
  std::vector<std::string> names;
  std::vector<ActionSet> sets;

  std::size_t size() const { return sets.size(); }
  /// Each set nonempty and inside an alphabet of `alphabet_size` actions.
  void validate(std::size_t alphabet_size) const;
};

/// Ground-truth nets bound to one alphabet, each with a ready Aligner.
class ModelSet {
 public:
  ModelSet(std::vector<PetriNet> nets, const ActionAlphabet& alphabet,
           AlignerOptions options = {});

  std::size_t size() const { return aligners_.size(); }
  const PetriNet& net(std::size_t i) const { return aligners_[i]->net(); }
  const Aligner& aligner(std::size_t i) const { return *aligners_[i]; }

 private:
  std::vector<std::unique_ptr<Aligner>> aligners_;
};

/// Union of the actions of every execution in `log`.
ActionSet action_set(const RoutineLog& log);

/// |a ∩ b| / |a ∪ b|; 0 when both are empty.
double jaccard(const ActionSet& a, const ActionSet& b);

/// Average over all clusters (empty ones included, contributing 0 when every
/// reference set is nonempty) of the best Jaccard match against `truth`.
double jaccard_coefficient(const ClusterSet& clusters, const GroundTruthActionSets& truth);

struct FitnessResult {
  double value = 0.0;
  std::size_t excluded = 0;  // empty logs left out of the average
};

/// Average over nonempty clusters of the best log-model fitness against any
/// model. Throws when every cluster is empty.
FitnessResult fitness(const ClusterSet& clusters, const ModelSet& models);

/// 100 * empty clusters / clusters.
double empty_log_pct(const ClusterSet& clusters);

/// 0/1 indicator vector of `set` over `dims` alphabet positions.
std::vector<double> binary_vector(const ActionSet& set, std::size_t dims);

/// Post-hoc routine-log extraction for techniques that only output action
/// sets: every execution's count vector goes to the type whose binary vector
/// is nearest (Euclidean, ties to the lowest index). One log per type, so
/// types attracting nothing yield empty logs.
ClusterSet baseline_assign(const ExecutionMultiset& executions,
                           const GroundTruthActionSets& action_sets,
                           const ActionAlphabet& alphabet);

/// One measurement row of an evaluation grid.
struct EvalRecord {
  std::string log;
  std::string technique;
  std::string clusterer;
  double noise_level = 0.0;
  std::size_t repetition = 0;
  double jc = 0.0;
  double fitness = 0.0;
  double empty_pct = 0.0;
  std::size_t n_clusters = 0;
  std::int64_t runtime_ms = 0;
  /// "ok", or "error: <message>" when the row failed (metrics are NaN then).
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

}  // namespace routinelog
