#include "routinelog/alignment.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

namespace routinelog {
namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : key) {
      h ^= v;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// Search state key: the marking followed by the trace position.
std::vector<std::uint32_t> make_key(const Marking& m, std::size_t pos) {
  std::vector<std::uint32_t> key(m.tokens);
  key.push_back(static_cast<std::uint32_t>(pos));
  return key;
}

std::vector<std::optional<Action>> bind_labels(const PetriNet& net,
                                               const ActionAlphabet& alphabet) {
  std::vector<std::optional<Action>> bound;
  bound.reserve(net.transitions().size());
  for (const auto& t : net.transitions()) {
    bound.push_back(t.label ? alphabet.find(*t.label) : std::nullopt);
  }
  return bound;
}

Alignment search(const PetriNet& net, const std::vector<std::optional<Action>>& bound,
                 std::span<const Action> trace, std::size_t budget) {
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  struct Node {
    Marking marking;
    std::size_t pos;
    std::uint32_t parent;
    Move move;
    double dist;
    bool settled;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, KeyHash> index;
  std::deque<std::uint32_t> open;

  auto relax = [&](const Marking& m, std::size_t pos, std::uint32_t parent, Move move) {
    const double step = move_cost(move.kind);
    const double nd = nodes[parent].dist + step;
    auto key = make_key(m, pos);
    auto it = index.find(key);
    std::uint32_t v;
    if (it == index.end()) {
      if (nodes.size() >= budget) throw Error("net unbounded or too large: state budget exhausted");
      v = static_cast<std::uint32_t>(nodes.size());
      nodes.push_back({m, pos, parent, move, nd, false});
      index.emplace(std::move(key), v);
    } else {
      v = it->second;
      if (nodes[v].settled || nd >= nodes[v].dist) return;
      nodes[v].dist = nd;
      nodes[v].parent = parent;
      nodes[v].move = move;
    }
    if (step == 0.0) {
      open.push_front(v);
    } else {
      open.push_back(v);
    }
  };

  nodes.push_back({net.initial_marking(), 0, kNone, Move{MoveKind::sync, {}, {}}, 0.0, false});
  index.emplace(make_key(net.initial_marking(), 0), 0);
  open.push_back(0);

  const auto& final_marking = net.final_marking();
  const auto& transitions = net.transitions();
  while (!open.empty()) {
    const auto u = open.front();
    open.pop_front();
    if (nodes[u].settled) continue;
    nodes[u].settled = true;
    const Marking m = nodes[u].marking;
    const std::size_t pos = nodes[u].pos;

    if (pos == trace.size() && m == final_marking) {
      Alignment out;
      out.cost = nodes[u].dist;
      for (auto v = u; nodes[v].parent != kNone; v = nodes[v].parent) {
        out.moves.push_back(nodes[v].move);
      }
      std::reverse(out.moves.begin(), out.moves.end());
      return out;
    }

    std::vector<std::size_t> fireable;
    for (std::size_t t = 0; t < transitions.size(); ++t) {
      if (is_enabled(net, m, t)) fireable.push_back(t);
    }
    if (pos < trace.size()) {
      for (auto t : fireable) {
        if (bound[t] && *bound[t] == trace[pos]) {
          relax(fire(net, m, t), pos + 1, u, Move{MoveKind::sync, trace[pos], t});
        }
      }
      relax(m, pos + 1, u, Move{MoveKind::log, trace[pos], std::nullopt});
    }
    for (auto t : fireable) {
      if (!transitions[t].silent()) {
        relax(fire(net, m, t), pos, u, Move{MoveKind::model, std::nullopt, t});
      }
    }
    for (auto t : fireable) {
      if (transitions[t].silent()) {
        relax(fire(net, m, t), pos, u, Move{MoveKind::model_silent, std::nullopt, t});
      }
    }
  }
  throw Error("final marking unreachable");
}

}  // namespace

double move_cost(MoveKind kind) {
  switch (kind) {
    case MoveKind::sync:
    case MoveKind::model_silent:
      return 0.0;
    case MoveKind::log:
    case MoveKind::model:
      return 1.0;
  }
  return 0.0;
}

Aligner::Aligner(const PetriNet& net, const ActionAlphabet& alphabet, AlignerOptions options)
    : net_(net), bound_(bind_labels(net, alphabet)), options_(options) {
  net_.validate();
  c_min_ = search(net_, bound_, {}, options_.state_budget).cost;
}

Alignment Aligner::align(std::span<const Action> trace) const {
  return search(net_, bound_, trace, options_.state_budget);
}

double Aligner::cost(std::span<const Action> trace) const {
  ActionSequence key(trace.begin(), trace.end());
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double c = align(trace).cost;
  std::lock_guard lock(cache_mutex_);
  cache_.emplace(std::move(key), c);
  return c;
}

double Aligner::fitness(const RoutineLog& log) const {
  if (log.empty()) throw Error("fitness cannot formally be computed on an empty log");
  std::map<ActionSequence, std::size_t> multiplicity;
  for (const auto& e : log.executions) ++multiplicity[e.actions];
  double cost_sum = 0.0;
  double worst_sum = 0.0;
  for (const auto& [trace, count] : multiplicity) {
    cost_sum += cost(trace) * static_cast<double>(count);
    worst_sum += (static_cast<double>(trace.size()) + c_min_) * static_cast<double>(count);
  }
  if (worst_sum == 0.0) return 1.0;
  return 1.0 - cost_sum / worst_sum;
}

Alignment optimal_alignment(const PetriNet& net, const ActionAlphabet& alphabet,
                            std::span<const Action> trace, AlignerOptions options) {
  net.validate();
  return search(net, bind_labels(net, alphabet), trace, options.state_budget);
}

double log_model_fitness(const RoutineLog& log, const PetriNet& net,
                         const ActionAlphabet& alphabet) {
  if (log.empty()) throw Error("fitness cannot formally be computed on an empty log");
  return Aligner(net, alphabet).fitness(log);
}

double brute_force_alignment_cost(const PetriNet& net, const ActionAlphabet& alphabet,
                                  std::span<const Action> trace, std::size_t depth_cap) {
  const auto bound = bind_labels(net, alphabet);
  const auto& transitions = net.transitions();
  double best = std::numeric_limits<double>::infinity();

  // Exhaustive recursion with branch-and-bound on cost. A node is also cut
  // when the same (marking, position) was already reached no deeper and no
  // more expensively: everything below it was explored from there.
  std::unordered_map<std::vector<std::uint32_t>, std::vector<std::pair<std::size_t, double>>, KeyHash>
      reached;
  auto dfs = [&](auto&& self, const Marking& m, std::size_t pos, double cost,
                 std::size_t depth) -> void {
    if (cost >= best) return;
    if (pos == trace.size() && m == net.final_marking()) {
      best = cost;
      return;
    }
    if (depth == depth_cap) return;
    auto key = m.tokens;
    key.push_back(static_cast<std::uint32_t>(pos));
    auto& seen = reached[key];
    for (const auto& [d, c] : seen) {
      if (d <= depth && c <= cost) return;
    }
    seen.emplace_back(depth, cost);
    for (std::size_t t = 0; t < transitions.size(); ++t) {
      if (!is_enabled(net, m, t)) continue;
      const Marking next = fire(net, m, t);
      if (pos < trace.size() && bound[t] && *bound[t] == trace[pos]) {
        self(self, next, pos + 1, cost, depth + 1);
      }
      self(self, next, pos, cost + (transitions[t].silent() ? 0.0 : 1.0), depth + 1);
    }
    if (pos < trace.size()) self(self, m, pos + 1, cost + 1.0, depth + 1);
  };
  dfs(dfs, net.initial_marking(), 0, 0.0, 0);
  if (best == std::numeric_limits<double>::infinity()) {
    throw Error("no complete alignment within the depth cap");
  }
  return best;
}

bool is_valid_alignment(const Alignment& alignment, const PetriNet& net,
                        const ActionAlphabet& alphabet, std::span<const Action> trace) {
  const auto bound = bind_labels(net, alphabet);
  Marking m = net.initial_marking();
  std::size_t pos = 0;
  double cost = 0.0;
  for (const auto& mv : alignment.moves) {
    cost += move_cost(mv.kind);
    const bool on_trace = mv.kind == MoveKind::sync || mv.kind == MoveKind::log;
    const bool on_model = mv.kind != MoveKind::log;
    if (on_trace) {
      if (!mv.action || pos >= trace.size() || trace[pos] != *mv.action) return false;
      ++pos;
    }
    if (on_model) {
      if (!mv.transition || *mv.transition >= net.transitions().size()) return false;
      const auto t = *mv.transition;
      const bool silent = net.transitions()[t].silent();
      if (mv.kind == MoveKind::model_silent && !silent) return false;
      if (mv.kind == MoveKind::model && silent) return false;
      if (mv.kind == MoveKind::sync && (!bound[t] || *bound[t] != *mv.action)) return false;
      if (!is_enabled(net, m, t)) return false;
      m = fire(net, m, t);
    }
  }
  return pos == trace.size() && m == net.final_marking() && cost == alignment.cost;
}

}  // namespace routinelog
