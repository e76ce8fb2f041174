#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "routinelog/core.hpp"
#include "routinelog/metrics.hpp"
#include "routinelog/petri_net.hpp"
#include "routinelog/rng.hpp"

namespace routinelog {

/// Block-structured routine description that compiles to a sound workflow
/// net (one source place, one sink place).
struct ProcessTree {
  enum class Kind { activity, silent, sequence, choice, parallel, loop };

  Kind kind = Kind::silent;
  std::string label;  // activity only
  std::vector<ProcessTree> children;

  static ProcessTree activity(std::string label);
  static ProcessTree tau();
  static ProcessTree sequence(std::vector<ProcessTree> children);
  static ProcessTree choice(std::vector<ProcessTree> children);
  static ProcessTree parallel(std::vector<ProcessTree> children);
  /// Do `body`, then either exit or do `redo` and repeat.
  static ProcessTree loop(ProcessTree body, ProcessTree redo = tau());
};

PetriNet to_petri_net(const ProcessTree& tree, std::string name);

/// Returns `net` extended so every complete run ends with a transition
/// labelled `label`, unless a transition with that label already feeds the
/// final marking.
PetriNet with_completion(PetriNet net, const std::string& label);

/// Random complete firing sequence, choosing uniformly among enabled
/// transitions until the final marking is reached. Returns visible labels.
/// Throws "final marking unreachable" on a dead marking and "playout cap"
/// once more than `max_len` visible actions were produced.
std::vector<std::string> playout_labels(const PetriNet& net, Rng& rng, std::size_t max_len);

RoutineExecution playout(const PetriNet& net, std::uint64_t seed, std::size_t max_len,
                         ActionAlphabet& alphabet);

struct RoutineType {
  std::string name;
  PetriNet net;
  std::string completion_label;
};

struct BenchmarkSpec {
  std::vector<RoutineType> types;
  std::size_t executions_per_type = 50;
  std::uint64_t playout_seed = 1;
  std::uint64_t shuffle_seed = 2;
  std::size_t max_len = 1000;
};

/// A synthetic UI log together with everything an evaluation needs.
struct Benchmark {
  UILog log;
  ActionAlphabet alphabet;
  CompletionSet completion;
  /// Executions in log order, each with its type_id.
  ExecutionMultiset executions;
  /// Per-row case id "<type name>#<n>", for the optional CSV case column.
  std::vector<std::string> case_ids;
  GroundTruthActionSets truth;
  /// Type nets, completion transition included.
  std::vector<PetriNet> models;
};

/// Plays out every type `executions_per_type` times (execution j of type i
/// uses sub-seed (playout_seed, i, j)), shuffles the executions with
/// shuffle_seed and concatenates them. G_i holds the visible labels of net i
/// plus its completion label.
Benchmark build_ui_log(const BenchmarkSpec& spec);

/// Built-in routine types cycling through five block-structured shapes with
/// choices, concurrency and a loop. Labels are prefixed per type so
/// alphabets are disjoint unless `shared_prefix` is set, in which case every
/// type starts with the common action "open_app". `loops` controls whether
/// the loop shape is used.
std::vector<RoutineType> builtin_routine_types(std::size_t n_types, bool shared_prefix = false,
                                               bool loops = true);

}  // namespace routinelog
