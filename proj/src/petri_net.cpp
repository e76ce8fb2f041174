#include "routinelog/petri_net.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace routinelog {

std::size_t Marking::total() const {
  return std::accumulate(tokens.begin(), tokens.end(), std::size_t{0});
}

std::size_t PetriNet::add_place(std::string id) {
  if (place_ids_.contains(id) || transition_ids_.contains(id)) {
    throw Error("duplicate net node id '" + id + "'");
  }
  const auto idx = places_.size();
  place_ids_.emplace(id, idx);
  places_.push_back(std::move(id));
  initial_.tokens.push_back(0);
  final_.tokens.push_back(0);
  return idx;
}

std::size_t PetriNet::add_transition(std::string id, std::optional<std::string> label) {
  if (place_ids_.contains(id) || transition_ids_.contains(id)) {
    throw Error("duplicate net node id '" + id + "'");
  }
  if (label && label->empty()) label.reset();
  const auto idx = transitions_.size();
  transition_ids_.emplace(id, idx);
  transitions_.push_back({std::move(id), std::move(label)});
  pre_.emplace_back();
  post_.emplace_back();
  return idx;
}

void PetriNet::add_arc(std::string_view source, std::string_view target, std::uint32_t weight) {
  if (weight == 0) throw Error("arc weight must be positive");
  if (auto p = place_index(source)) {
    auto t = transition_index(target);
    if (!t) throw Error("arc references unknown node '" + std::string(target) + "'");
    pre_[*t].push_back({*p, weight});
    return;
  }
  if (auto t = transition_index(source)) {
    auto p = place_index(target);
    if (!p) throw Error("arc references unknown node '" + std::string(target) + "'");
    post_[*t].push_back({*p, weight});
    return;
  }
  throw Error("arc references unknown node '" + std::string(source) + "'");
}

Marking PetriNet::marking_of(std::span<const std::string> place_ids) const {
  Marking m{std::vector<std::uint32_t>(places_.size(), 0)};
  for (const auto& id : place_ids) {
    auto p = place_index(id);
    if (!p) throw Error("marking references unknown place '" + id + "'");
    ++m.tokens[*p];
  }
  return m;
}

std::optional<std::size_t> PetriNet::place_index(std::string_view id) const {
  if (auto it = place_ids_.find(std::string(id)); it != place_ids_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::size_t> PetriNet::transition_index(std::string_view id) const {
  if (auto it = transition_ids_.find(std::string(id)); it != transition_ids_.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::vector<std::size_t> PetriNet::sink_places() const {
  std::vector<bool> has_out(places_.size(), false);
  for (const auto& ins : pre_) {
    for (const auto& a : ins) has_out[a.place] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < places_.size(); ++p) {
    if (!has_out[p]) out.push_back(p);
  }
  return out;
}

std::vector<std::string> PetriNet::visible_labels() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& t : transitions_) {
    if (t.label && seen.insert(*t.label).second) out.push_back(*t.label);
  }
  return out;
}

void PetriNet::validate() const {
  if (transitions_.empty()) throw Error("net '" + name + "' has no transitions");
  if (initial_.tokens.size() != places_.size() || final_.tokens.size() != places_.size()) {
    throw Error("net '" + name + "' markings do not match its places");
  }
}

bool is_enabled(const PetriNet& net, const Marking& m, std::size_t t) {
  return std::all_of(net.inputs(t).begin(), net.inputs(t).end(),
                     [&](const ArcEnd& a) { return m.tokens[a.place] >= a.weight; });
}

std::vector<std::size_t> enabled(const PetriNet& net, const Marking& m) {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    if (is_enabled(net, m, t)) out.push_back(t);
  }
  return out;
}

Marking fire(const PetriNet& net, const Marking& m, std::size_t t) {
  if (t >= net.transitions().size()) throw Error("unknown transition index");
  if (!is_enabled(net, m, t)) {
    throw Error("transition '" + net.transitions()[t].id + "' is not enabled");
  }
  Marking next = m;
  for (const auto& a : net.inputs(t)) next.tokens[a.place] -= a.weight;
  for (const auto& a : net.outputs(t)) next.tokens[a.place] += a.weight;
  return next;
}

}  // namespace routinelog
