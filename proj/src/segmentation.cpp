#include "routinelog/segmentation.hpp"

#include <algorithm>

namespace routinelog {

Segmentation segment(const UILog& log, const CompletionSet& finals) {
  if (finals.size() == 0) throw Error("completion set must be nonempty");
  Segmentation out;
  ActionSequence current;
  for (Action a : log.actions) {
    current.push_back(a);
    if (finals.contains(a)) {
      out.executions.push_back(RoutineExecution{std::move(current), std::nullopt});
      current.clear();
    }
  }
  out.remainder = std::move(current);
  out.no_completion_found = !log.empty() && out.executions.empty();
  return out;
}

bool validate_segmentation(const ExecutionMultiset& segments, const UILog& log,
                           const CompletionSet& finals, const ActionSequence& remainder) {
  std::size_t pos = 0;
  for (const auto& seg : segments) {
    if (seg.actions.empty()) return false;
    const auto finals_in = std::count_if(seg.actions.begin(), seg.actions.end(),
                                         [&](Action a) { return finals.contains(a); });
    if (finals_in != 1 || !finals.contains(seg.actions.back())) return false;
    if (pos + seg.size() > log.size()) return false;
    if (!std::equal(seg.actions.begin(), seg.actions.end(), log.actions.begin() + pos)) {
      return false;
    }
    pos += seg.size();
  }
  if (std::any_of(remainder.begin(), remainder.end(),
                  [&](Action a) { return finals.contains(a); })) {
    return false;
  }
  return pos + remainder.size() == log.size() &&
         std::equal(remainder.begin(), remainder.end(), log.actions.begin() + pos);
}

}  // namespace routinelog
