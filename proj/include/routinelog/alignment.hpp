#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "routinelog/core.hpp"
#include "routinelog/petri_net.hpp"

namespace routinelog {

/// Declaration order is the tie-breaking order of the search.
enum class MoveKind { sync, log, model, model_silent };

struct Move {
  MoveKind kind;
  /// Trace action for sync and log moves.
  std::optional<Action> action;
  /// Fired transition for sync and model moves.
  std::optional<std::size_t> transition;

  friend bool operator==(const Move&, const Move&) = default;
};

struct Alignment {
  std::vector<Move> moves;
  double cost = 0.0;
};

/// Unit costs: synchronous and silent moves are free, log-only and visible
/// model-only moves cost 1.
double move_cost(MoveKind kind);

struct AlignerOptions {
  std::size_t state_budget = 1'000'000;
};

/// Optimal alignments of traces against one net whose visible labels are
/// resolved through an action alphabet (labels unknown to the alphabet can
/// never synchronise).
///
/// The minimal cost of a complete run of the model (c_min, the cost of
/// aligning the empty trace) is computed once in the constructor, which
/// therefore throws when the final marking is unreachable. Alignment costs
/// are cached per distinct trace; the cache is guarded, so one Aligner can be
/// shared by concurrent evaluators.
class Aligner {
 public:
  Aligner(const PetriNet& net, const ActionAlphabet& alphabet, AlignerOptions options = {});
  Aligner(const Aligner&) = delete;
  Aligner& operator=(const Aligner&) = delete;

  /// Uniform-cost search over (marking, trace position).
  Alignment align(std::span<const Action> trace) const;
  /// Cost of align(trace), memoised.
  double cost(std::span<const Action> trace) const;

  double min_model_cost() const { return c_min_; }

  /// 1 - sum(costs) / sum(|trace| + c_min). Throws for an empty log.
  double fitness(const RoutineLog& log) const;

  const PetriNet& net() const { return net_; }
  /// Action bound to transition t, if visible and known to the alphabet.
  std::optional<Action> bound_action(std::size_t t) const { return bound_[t]; }

 private:
  PetriNet net_;
  std::vector<std::optional<Action>> bound_;
  AlignerOptions options_;
  double c_min_ = 0.0;
  mutable std::mutex cache_mutex_;
  mutable std::map<ActionSequence, double> cache_;
};

Alignment optimal_alignment(const PetriNet& net, const ActionAlphabet& alphabet,
                            std::span<const Action> trace, AlignerOptions options = {});

double log_model_fitness(const RoutineLog& log, const PetriNet& net,
                         const ActionAlphabet& alphabet);

/// Exhaustive depth-first enumeration of move sequences up to `depth_cap`
/// moves, keeping the cheapest one that ends in the final marking with the
/// whole trace consumed. Intended for small instances only; throws when no
/// complete alignment exists within the cap.
double brute_force_alignment_cost(const PetriNet& net, const ActionAlphabet& alphabet,
                                  std::span<const Action> trace, std::size_t depth_cap);

/// Checks both projections of `alignment` (sync/log moves spell the trace;
/// sync/model moves form a firing sequence from the initial to the final
/// marking, with sync labels matching) and that its cost is the sum of its
/// move costs.
bool is_valid_alignment(const Alignment& alignment, const PetriNet& net,
                        const ActionAlphabet& alphabet, std::span<const Action> trace);

}  // namespace routinelog
