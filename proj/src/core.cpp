#include "routinelog/core.hpp"

#include <algorithm>

namespace routinelog {

ActionAlphabet ActionAlphabet::build(std::span<const std::string> raw_labels) {
  if (raw_labels.empty()) throw Error("empty alphabet");
  ActionAlphabet alphabet;
  for (const auto& label : raw_labels) alphabet.intern(label);
  return alphabet;
}

Action ActionAlphabet::intern(std::string_view label) {
  if (label.empty()) throw Error("empty alphabet: action labels must be nonempty");
  std::string key(label);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  const auto a = static_cast<Action>(labels_.size());
  index_.emplace(key, a);
  labels_.push_back(std::move(key));
  return a;
}

std::optional<Action> ActionAlphabet::find(std::string_view label) const {
  if (auto it = index_.find(std::string(label)); it != index_.end()) return it->second;
  return std::nullopt;
}

Action ActionAlphabet::at(std::string_view label) const {
  if (auto a = find(label)) return *a;
  throw Error("unknown action label '" + std::string(label) + "'");
}

std::vector<std::string> ActionAlphabet::to_labels(std::span<const Action> actions) const {
  std::vector<std::string> out;
  out.reserve(actions.size());
  for (Action a : actions) out.push_back(label(a));
  return out;
}

ActionSequence ActionAlphabet::to_actions(std::span<const std::string> labels) const {
  ActionSequence out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(at(l));
  return out;
}

CompletionSet::CompletionSet(std::set<Action> members, std::size_t alphabet_size)
    : members_(std::move(members)) {
  if (members_.empty()) throw Error("completion set must be nonempty");
  for (Action a : members_) {
    if (a >= alphabet_size) throw Error("completion action outside the alphabet");
  }
  if (members_.size() >= alphabet_size) {
    throw Error("completion set must be a strict subset of the alphabet");
  }
}

CompletionSet CompletionSet::from_labels(std::span<const std::string> labels,
                                         const ActionAlphabet& alphabet) {
  std::set<Action> members;
  for (const auto& l : labels) members.insert(alphabet.at(l));
  return CompletionSet(std::move(members), alphabet.size());
}

std::size_t ClusterSet::empty_count() const {
  return static_cast<std::size_t>(
      std::count_if(logs.begin(), logs.end(), [](const RoutineLog& l) { return l.empty(); }));
}

std::size_t ClusterSet::execution_count() const {
  std::size_t n = 0;
  for (const auto& l : logs) n += l.size();
  return n;
}

bool ClusterSet::is_partition_of(const ExecutionMultiset& executions) const {
  if (assignment.size() != executions.size()) return false;
  if (execution_count() != executions.size()) return false;
  std::vector<std::size_t> cursor(logs.size(), 0);
  for (std::size_t j = 0; j < executions.size(); ++j) {
    const auto c = assignment[j];
    if (c >= logs.size()) return false;
    const auto& log = logs[c].executions;
    if (cursor[c] >= log.size() || !(log[cursor[c]] == executions[j])) return false;
    ++cursor[c];
  }
  return true;
}

ClusterSet make_cluster_set(std::span<const std::size_t> labels,
                            const ExecutionMultiset& executions,
                            std::size_t min_clusters) {
  if (labels.size() != executions.size()) {
    throw Error("label count does not match execution count");
  }
  std::size_t n = min_clusters;
  for (auto l : labels) n = std::max(n, l + 1);
  ClusterSet out;
  out.logs.resize(n);
  out.assignment.assign(labels.begin(), labels.end());
  for (std::size_t j = 0; j < executions.size(); ++j) {
    out.logs[labels[j]].executions.push_back(executions[j]);
  }
  return out;
}

UILog concatenate(const ExecutionMultiset& executions) {
  UILog log;
  for (const auto& e : executions) {
    log.actions.insert(log.actions.end(), e.actions.begin(), e.actions.end());
  }
  return log;
}

}  // namespace routinelog
