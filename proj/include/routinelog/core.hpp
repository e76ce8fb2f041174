#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace routinelog {

/// Raised for every contract violation and malformed input in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position of a label inside an ActionAlphabet (0-based).
using Action = std::uint32_t;
using ActionSequence = std::vector<Action>;

/// Ordered set of distinct action labels with a label -> position index.
///
/// Positions are assigned in first-occurrence order. An alphabet may grow
/// through intern() while it is being assembled; once shared it is treated
/// as immutable.
class ActionAlphabet {
 public:
  ActionAlphabet() = default;

  /// Deduplicates `raw_labels` in first-occurrence order.
  /// Throws Error("empty alphabet") for an empty input or an empty label.
  static ActionAlphabet build(std::span<const std::string> raw_labels);

  /// Returns the position of `label`, appending it when unseen.
  Action intern(std::string_view label);

  std::optional<Action> find(std::string_view label) const;
  /// Like find() but throws Error naming the label when it is absent.
  Action at(std::string_view label) const;

  const std::string& label(Action a) const { return labels_.at(a); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  bool contains(Action a) const { return a < labels_.size(); }

  std::vector<std::string> to_labels(std::span<const Action> actions) const;
  ActionSequence to_actions(std::span<const std::string> labels) const;

  friend bool operator==(const ActionAlphabet& a, const ActionAlphabet& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Action> index_;
};

inline ActionAlphabet build_alphabet(std::span<const std::string> raw_labels) {
  return ActionAlphabet::build(raw_labels);
}

/// An identifier-free UI log: a flat sequence of actions.
struct UILog {
  ActionSequence actions;

  std::size_t size() const { return actions.size(); }
  bool empty() const { return actions.empty(); }
  friend bool operator==(const UILog&, const UILog&) = default;
};

/// Actions that mark the end of a routine execution. Must be a nonempty
/// strict subset of the alphabet it is validated against.
class CompletionSet {
 public:
  CompletionSet() = default;
  CompletionSet(std::set<Action> members, std::size_t alphabet_size);

  static CompletionSet from_labels(std::span<const std::string> labels,
                                   const ActionAlphabet& alphabet);

  bool contains(Action a) const { return members_.contains(a); }
  const std::set<Action>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::set<Action> members_;
};

/// One contiguous performance of a routine. `type_id` is ground truth and is
/// only filled in by the benchmark generator.
struct RoutineExecution {
  ActionSequence actions;
  std::optional<std::size_t> type_id;

  std::size_t size() const { return actions.size(); }
  /// Equality ignores provenance: executions are compared as sequences.
  friend bool operator==(const RoutineExecution& a, const RoutineExecution& b) {
    return a.actions == b.actions;
  }
};

using ExecutionMultiset = std::vector<RoutineExecution>;

struct RoutineLog {
  std::vector<RoutineExecution> executions;

  bool empty() const { return executions.empty(); }
  std::size_t size() const { return executions.size(); }
};

/// Partition of an ExecutionMultiset into routine logs. `assignment[j]` is
/// the index of the log holding the j-th input execution.
struct ClusterSet {
  std::vector<RoutineLog> logs;
  std::vector<std::size_t> assignment;

  std::size_t size() const { return logs.size(); }
  std::size_t empty_count() const;
  std::size_t execution_count() const;

  /// Checks the partition law against the multiset the clustering came from:
  /// every execution sits in exactly the log its assignment names, in input
  /// order, and nothing else is present.
  bool is_partition_of(const ExecutionMultiset& executions) const;
};

/// Builds a ClusterSet from a resolved per-execution label vector. The number
/// of logs is max(label)+1 unless `min_clusters` is larger (baseline types
/// that attract nothing still count as logs).
ClusterSet make_cluster_set(std::span<const std::size_t> labels,
                            const ExecutionMultiset& executions,
                            std::size_t min_clusters = 0);

UILog concatenate(const ExecutionMultiset& executions);

}  // namespace routinelog
