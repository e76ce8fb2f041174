#pragma once

// Alignment cost through the model language: with unit log/model moves and
// free silent moves, the optimal cost against a run whose visible trace is s
// equals |t| + |s| - 2 * LCS(t, s). Enumerating every complete run up to a
// visible-length bound therefore yields the optimal cost independently of any
// search over the synchronous product.
//
// Random net families: small process-tree workflow nets and state-machine
// nets with arbitrary topology (one token, so always bounded).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "routinelog/generator.hpp"
#include "routinelog/petri_net.hpp"

namespace oracle {

using Word = std::vector<std::string>;

inline std::size_t lcs(const Word& a, const Word& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = a[i - 1] == b[j - 1] ? d[i - 1][j - 1] + 1 : std::max(d[i - 1][j], d[i][j - 1]);
    }
  }
  return d[a.size()][b.size()];
}

/// Visible traces of complete runs with at most `max_len` visible actions.
/// Returns nullopt when more than `state_cap` (marking, prefix) states are
/// needed.
inline std::optional<std::set<Word>> language(const routinelog::PetriNet& net, std::size_t max_len,
                                              std::size_t state_cap = 200000) {
  using routinelog::Marking;
  std::set<std::pair<std::vector<std::uint32_t>, Word>> seen;
  std::vector<std::pair<Marking, Word>> stack{{net.initial_marking(), {}}};
  seen.insert({net.initial_marking().tokens, {}});
  std::set<Word> out;
  while (!stack.empty()) {
    auto [m, w] = stack.back();
    stack.pop_back();
    if (m == net.final_marking()) out.insert(w);
    for (auto t : routinelog::enabled(net, m)) {
      auto next = routinelog::fire(net, m, t);
      for (auto tok : next.tokens) {
        if (tok > 4) return std::nullopt;
      }
      Word nw = w;
      if (const auto& l = net.transitions()[t].label) {
        if (nw.size() == max_len) continue;
        nw.push_back(*l);
      }
      if (seen.insert({next.tokens, nw}).second) {
        if (seen.size() > state_cap) return std::nullopt;
        stack.push_back({std::move(next), std::move(nw)});
      }
    }
  }
  return out;
}

struct OracleCost {
  double cost;
  double c_min;
};

/// Optimal alignment cost of `trace` (labels) and the model's c_min, or
/// nullopt when the instance is too large or the final marking is
/// unreachable within the bound.
inline std::optional<OracleCost> alignment_cost(const routinelog::PetriNet& net, const Word& trace,
                                                std::size_t c_min_search = 12) {
  std::optional<std::size_t> c_min;
  for (std::size_t len = 0; len <= c_min_search && !c_min; ++len) {
    auto lang = language(net, len);
    if (!lang) return std::nullopt;
    for (const auto& w : *lang) {
      if (!c_min || w.size() < *c_min) c_min = w.size();
    }
  }
  if (!c_min) return std::nullopt;
  const auto lang = language(net, 2 * trace.size() + *c_min);
  if (!lang) return std::nullopt;
  double best = static_cast<double>(trace.size() + *c_min);
  for (const auto& w : *lang) {
    const double c = static_cast<double>(trace.size() + w.size() - 2 * lcs(trace, w));
    best = std::min(best, c);
  }
  return OracleCost{best, static_cast<double>(*c_min)};
}

// ------------------------------------------------------------------ nets

inline const std::vector<std::string>& label_pool() {
  static const std::vector<std::string> pool{"a", "b", "c", "d", "e"};
  return pool;
}

/// Random process tree with at most `budget` leaves.
inline routinelog::ProcessTree random_tree(std::mt19937_64& rng, int budget) {
  using PT = routinelog::ProcessTree;
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  if (budget <= 1 || pick(3) == 0) {
    if (pick(6) == 0) return PT::tau();
    return PT::activity(label_pool()[pick(static_cast<int>(label_pool().size()))]);
  }
  const int arity = 2 + (budget >= 4 ? pick(2) : 0);
  std::vector<PT> kids;
  int left = budget;
  for (int i = 0; i < arity; ++i) {
    const int share = std::max(1, left / (arity - i));
    kids.push_back(random_tree(rng, share));
    left -= share;
  }
  switch (pick(4)) {
    case 0:
      return PT::sequence(std::move(kids));
    case 1:
      return PT::choice(std::move(kids));
    case 2:
      return PT::parallel(std::move(kids));
    default:
      // body must emit something so the loop has no silent cycle
      return PT::loop(PT::activity(label_pool()[pick(3)]), std::move(kids[0]));
  }
}

/// Random state machine: places p0..p(n-1), each transition moves the single
/// token from one place to another, p0 initial, p(n-1) final.
inline routinelog::PetriNet random_state_machine(std::mt19937_64& rng, std::size_t n_places,
                                                 std::size_t n_transitions) {
  routinelog::PetriNet net;
  for (std::size_t p = 0; p < n_places; ++p) net.add_place("p" + std::to_string(p));
  for (std::size_t t = 0; t < n_transitions; ++t) {
    const auto id = "t" + std::to_string(t);
    std::optional<std::string> label;
    if (rng() % 5 != 0) label = label_pool()[rng() % label_pool().size()];
    net.add_transition(id, label);
    // the first transitions form a spine so the final place is reachable
    const std::size_t from = t + 1 < n_places ? t : rng() % n_places;
    const std::size_t to = t + 1 < n_places ? t + 1 : rng() % n_places;
    net.add_arc("p" + std::to_string(from), id);
    net.add_arc(id, "p" + std::to_string(to));
  }
  const std::vector<std::string> init{"p0"}, fin{"p" + std::to_string(n_places - 1)};
  net.set_initial(net.marking_of(init));
  net.set_final(net.marking_of(fin));
  return net;
}

inline Word random_trace(std::mt19937_64& rng, std::size_t max_len) {
  static const std::vector<std::string> labels{"a", "b", "c", "d", "e", "x"};
  Word w(rng() % (max_len + 1));
  for (auto& l : w) l = labels[rng() % labels.size()];
  return w;
}

}  // namespace oracle
