#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "routinelog/core.hpp"

namespace routinelog {

/// Token count per place, indexed like PetriNet::places().
struct Marking {
  std::vector<std::uint32_t> tokens;

  friend bool operator==(const Marking&, const Marking&) = default;
  std::size_t total() const;
};

struct Transition {
  std::string id;
  /// Visible label; nullopt for a silent transition.
  std::optional<std::string> label;

  bool silent() const { return !label.has_value(); }
};

struct ArcEnd {
  std::size_t place;
  std::uint32_t weight = 1;
};

/// Place/transition net with an initial and a final marking.
class PetriNet {
 public:
  std::string name;

  std::size_t add_place(std::string id);
  std::size_t add_transition(std::string id, std::optional<std::string> label);
  /// Arc between a place and a transition, in either direction, by node id.
  void add_arc(std::string_view source, std::string_view target, std::uint32_t weight = 1);

  void set_initial(Marking m) { initial_ = std::move(m); }
  void set_final(Marking m) { final_ = std::move(m); }
  /// Marking with one token on each listed place id.
  Marking marking_of(std::span<const std::string> place_ids) const;

  const std::vector<std::string>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  std::span<const ArcEnd> inputs(std::size_t t) const { return pre_[t]; }
  std::span<const ArcEnd> outputs(std::size_t t) const { return post_[t]; }
  const Marking& initial_marking() const { return initial_; }
  const Marking& final_marking() const { return final_; }

  std::optional<std::size_t> place_index(std::string_view id) const;
  std::optional<std::size_t> transition_index(std::string_view id) const;

  /// Places with no outgoing arc.
  std::vector<std::size_t> sink_places() const;

  /// Distinct visible labels in transition order.
  std::vector<std::string> visible_labels() const;

  /// Throws Error when the structural invariants do not hold: at least one
  /// transition, markings sized to the place set.
  void validate() const;

 private:
  std::vector<std::string> places_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<ArcEnd>> pre_;
  std::vector<std::vector<ArcEnd>> post_;
  std::unordered_map<std::string, std::size_t> place_ids_;
  std::unordered_map<std::string, std::size_t> transition_ids_;
  Marking initial_;
  Marking final_;
};

bool is_enabled(const PetriNet& net, const Marking& m, std::size_t t);
/// Transitions whose input places all hold enough tokens, ascending.
std::vector<std::size_t> enabled(const PetriNet& net, const Marking& m);
/// Consumes input tokens and produces output tokens. Throws for a disabled t.
Marking fire(const PetriNet& net, const Marking& m, std::size_t t);

}  // namespace routinelog
