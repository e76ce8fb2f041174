#pragma once

#include <cstdint>
#include <vector>

#include "routinelog/core.hpp"
#include "routinelog/rng.hpp"

namespace routinelog {

/// Parameters of the skip/insert/copy noise process.
struct NoiseConfig {
  double level = 0.0;  // l in [0, 1]
  std::uint64_t seed = 0;
  /// Actions random insertions are drawn from (uniformly).
  std::vector<Action> insert_pool;
  /// Hold the segment's last (completion) action out of the process and
  /// re-append it unchanged.
  bool preserve_finals = true;

  void validate() const;
};

/// Default pool: every alphabet action, minus the completion actions unless
/// `include_finals` is set.
std::vector<Action> default_insert_pool(const ActionAlphabet& alphabet,
                                        const CompletionSet& finals, bool include_finals = false);

/// Output of one noise pass together with the origin of every emitted action:
/// the source position it was copied from, or kInserted.
struct NoisyTrace {
  static constexpr std::int64_t kInserted = -1;
  ActionSequence actions;
  std::vector<std::int64_t> origin;
  std::size_t skipped = 0;
};

/// One pass of the noise process over `actions` using `rng`. Each iteration
/// draws u1; if u1 <= level a second draw u2 decides between skipping the
/// current action (u2 <= 0.5) and emitting a random pool action without
/// advancing. Otherwise the current action is copied and the cursor advances.
NoisyTrace inject_traced(std::span<const Action> actions, const NoiseConfig& config, Rng& rng);

/// Perturbs one routine execution using a generator seeded from config.seed.
RoutineExecution inject(const RoutineExecution& segment, const NoiseConfig& config);

/// Perturbs every execution; execution j uses sub-seed derive_seed(seed, {j}).
ExecutionMultiset inject_log(const ExecutionMultiset& executions, const NoiseConfig& config);

/// Noise over a whole UI log. With preserve_finals the log is segmented at
/// completion actions, each segment is perturbed by inject_log (the trailing
/// remainder is perturbed without protection, sub-seed index = segment
/// count) and the results are concatenated. Without preserve_finals the
/// process runs once over the entire log.
UILog inject_ui_log(const UILog& log, const CompletionSet& finals, const NoiseConfig& config);

}  // namespace routinelog
