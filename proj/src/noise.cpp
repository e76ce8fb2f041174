#include "routinelog/noise.hpp"

#include "routinelog/segmentation.hpp"

namespace routinelog {

void NoiseConfig::validate() const {
  if (!(level >= 0.0 && level <= 1.0)) throw Error("noise level must lie in [0, 1]");
  if (level > 0.0 && insert_pool.empty()) {
    throw Error("insert pool must be nonempty when the noise level is positive");
  }
}

std::vector<Action> default_insert_pool(const ActionAlphabet& alphabet,
                                        const CompletionSet& finals, bool include_finals) {
  std::vector<Action> pool;
  for (Action a = 0; a < alphabet.size(); ++a) {
    if (include_finals || !finals.contains(a)) pool.push_back(a);
  }
  return pool;
}

NoisyTrace inject_traced(std::span<const Action> actions, const NoiseConfig& config, Rng& rng) {
  config.validate();
  NoisyTrace out;
  std::size_t end = actions.size();
  if (config.preserve_finals && end > 0) --end;

  std::size_t i = 0;
  while (i < end) {
    if (rng.uniform01() <= config.level && config.level > 0.0) {
      if (rng.uniform01() <= 0.5) {
        ++i;  // missing action
        ++out.skipped;
      } else {
        out.actions.push_back(config.insert_pool[rng.below(config.insert_pool.size())]);
        out.origin.push_back(NoisyTrace::kInserted);
      }
    } else {
      out.actions.push_back(actions[i]);
      out.origin.push_back(static_cast<std::int64_t>(i));
      ++i;
    }
  }
  if (end < actions.size()) {
    out.actions.push_back(actions[end]);
    out.origin.push_back(static_cast<std::int64_t>(end));
  }
  return out;
}

RoutineExecution inject(const RoutineExecution& segment, const NoiseConfig& config) {
  Rng rng(config.seed);
  return RoutineExecution{inject_traced(segment.actions, config, rng).actions, segment.type_id};
}

ExecutionMultiset inject_log(const ExecutionMultiset& executions, const NoiseConfig& config) {
  config.validate();
  ExecutionMultiset out;
  out.reserve(executions.size());
  for (std::size_t j = 0; j < executions.size(); ++j) {
    Rng rng(derive_seed(config.seed, {j}));
    out.push_back(RoutineExecution{inject_traced(executions[j].actions, config, rng).actions,
                                   executions[j].type_id});
  }
  return out;
}

UILog inject_ui_log(const UILog& log, const CompletionSet& finals, const NoiseConfig& config) {
  config.validate();
  if (!config.preserve_finals) {
    Rng rng(config.seed);
    return UILog{inject_traced(log.actions, config, rng).actions};
  }
  const auto seg = segment(log, finals);
  UILog out = concatenate(inject_log(seg.executions, config));
  if (!seg.remainder.empty()) {
    NoiseConfig loose = config;
    loose.preserve_finals = false;
    Rng rng(derive_seed(config.seed, {seg.executions.size()}));
    const auto tail = inject_traced(seg.remainder, loose, rng).actions;
    out.actions.insert(out.actions.end(), tail.begin(), tail.end());
  }
  return out;
}

}  // namespace routinelog
