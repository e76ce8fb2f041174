#pragma once

#include "routinelog/core.hpp"

namespace routinelog {

/// Result of cutting a UI log at completion actions.
struct Segmentation {
  ExecutionMultiset executions;
  /// Trailing actions after the last completion action. Not an execution.
  ActionSequence remainder;

  /// True when the log is nonempty but holds no completion action at all.
  bool no_completion_found = false;
};

/// Splits `log` after every occurrence of a completion action. Each segment
/// ends with its only completion action; a trailing suffix without one is
/// returned as the remainder.
Segmentation segment(const UILog& log, const CompletionSet& finals);

/// True iff the segments concatenated with `remainder` reproduce `log`, every
/// segment ends in a completion action and holds no other, and the remainder
/// holds none.
bool validate_segmentation(const ExecutionMultiset& segments, const UILog& log,
                           const CompletionSet& finals,
                           const ActionSequence& remainder = {});

}  // namespace routinelog
