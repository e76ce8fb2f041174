#include "routinelog/generator.hpp"

#include <algorithm>
#include <map>

namespace routinelog {

ProcessTree ProcessTree::activity(std::string label) {
  return ProcessTree{Kind::activity, std::move(label), {}};
}
ProcessTree ProcessTree::tau() { return ProcessTree{Kind::silent, {}, {}}; }
ProcessTree ProcessTree::sequence(std::vector<ProcessTree> c) {
  return ProcessTree{Kind::sequence, {}, std::move(c)};
}
ProcessTree ProcessTree::choice(std::vector<ProcessTree> c) {
  return ProcessTree{Kind::choice, {}, std::move(c)};
}
ProcessTree ProcessTree::parallel(std::vector<ProcessTree> c) {
  return ProcessTree{Kind::parallel, {}, std::move(c)};
}
ProcessTree ProcessTree::loop(ProcessTree body, ProcessTree redo) {
  return ProcessTree{Kind::loop, {}, {std::move(body), std::move(redo)}};
}

namespace {

class NetCompiler {
 public:
  explicit NetCompiler(PetriNet& net) : net_(net) {}

  std::string place() {
    auto id = "p" + std::to_string(places_++);
    net_.add_place(id);
    return id;
  }

  void transition(const std::string& in, const std::string& out, std::optional<std::string> label) {
    const auto id = "t" + std::to_string(transitions_++);
    net_.add_transition(id, std::move(label));
    net_.add_arc(in, id);
    net_.add_arc(id, out);
  }

  void compile(const ProcessTree& node, const std::string& in, const std::string& out) {
    using K = ProcessTree::Kind;
    switch (node.kind) {
      case K::activity:
        if (node.label.empty()) throw Error("activity without a label");
        transition(in, out, node.label);
        break;
      case K::silent:
        transition(in, out, std::nullopt);
        break;
      case K::sequence: {
        if (node.children.empty()) throw Error("empty sequence");
        std::string from = in;
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          const auto to = i + 1 == node.children.size() ? out : place();
          compile(node.children[i], from, to);
          from = to;
        }
        break;
      }
      case K::choice:
        if (node.children.empty()) throw Error("empty choice");
        for (const auto& c : node.children) compile(c, in, out);
        break;
      case K::parallel: {
        if (node.children.empty()) throw Error("empty parallel block");
        const auto split = "t" + std::to_string(transitions_++);
        const auto join = "t" + std::to_string(transitions_++);
        net_.add_transition(split, std::nullopt);
        net_.add_transition(join, std::nullopt);
        net_.add_arc(in, split);
        net_.add_arc(join, out);
        for (const auto& c : node.children) {
          const auto a = place();
          const auto b = place();
          net_.add_arc(split, a);
          compile(c, a, b);
          net_.add_arc(b, join);
        }
        break;
      }
      case K::loop: {
        if (node.children.size() != 2) throw Error("loop needs a body and a redo part");
        const auto start = place();
        const auto mid = place();
        transition(in, start, std::nullopt);
        compile(node.children[0], start, mid);
        compile(node.children[1], mid, start);
        transition(mid, out, std::nullopt);
        break;
      }
    }
  }

 private:
  PetriNet& net_;
  std::size_t places_ = 0;
  std::size_t transitions_ = 0;
};

}  // namespace

PetriNet to_petri_net(const ProcessTree& tree, std::string name) {
  PetriNet net;
  net.name = std::move(name);
  NetCompiler c(net);
  const auto source = c.place();
  const auto sink = c.place();
  c.compile(tree, source, sink);
  const std::vector<std::string> src{source}, snk{sink};
  net.set_initial(net.marking_of(src));
  net.set_final(net.marking_of(snk));
  net.validate();
  return net;
}

PetriNet with_completion(PetriNet net, const std::string& label) {
  const auto& fin = net.final_marking().tokens;
  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    if (net.transitions()[t].label != label) continue;
    for (const auto& a : net.outputs(t)) {
      if (fin[a.place] > 0) return net;
    }
  }
  std::string done = "p_done";
  while (net.place_index(done) || net.transition_index(done)) done += "_";
  std::string complete = "t_complete";
  while (net.place_index(complete) || net.transition_index(complete)) complete += "_";

  const Marking old_final = net.final_marking();
  net.add_place(done);
  net.add_transition(complete, label);
  for (std::size_t p = 0; p < old_final.tokens.size(); ++p) {
    if (old_final.tokens[p] > 0) net.add_arc(net.places()[p], complete, old_final.tokens[p]);
  }
  net.add_arc(complete, done);
  const std::vector<std::string> fin_ids{done};
  net.set_final(net.marking_of(fin_ids));
  return net;
}

std::vector<std::string> playout_labels(const PetriNet& net, Rng& rng, std::size_t max_len) {
  net.validate();
  std::vector<std::string> out;
  Marking m = net.initial_marking();
  // Silent livelocks are cut off by a generous bound on total firings.
  const std::size_t firing_cap = 16 * (max_len + 1) + 64;
  for (std::size_t fired = 0;; ++fired) {
    if (m == net.final_marking()) return out;
    const auto options = enabled(net, m);
    if (options.empty()) throw Error("final marking unreachable (dead marking during playout)");
    if (fired >= firing_cap) throw Error("playout cap exceeded");
    const auto t = options[rng.below(options.size())];
    m = fire(net, m, t);
    if (const auto& label = net.transitions()[t].label) {
      if (out.size() == max_len) throw Error("playout cap exceeded");
      out.push_back(*label);
    }
  }
}

RoutineExecution playout(const PetriNet& net, std::uint64_t seed, std::size_t max_len,
                         ActionAlphabet& alphabet) {
  Rng rng(seed);
  RoutineExecution e;
  for (const auto& l : playout_labels(net, rng, max_len)) e.actions.push_back(alphabet.intern(l));
  return e;
}

Benchmark build_ui_log(const BenchmarkSpec& spec) {
  if (spec.types.empty()) throw Error("benchmark needs at least one routine type");
  if (spec.executions_per_type == 0) throw Error("executions per type must be >= 1");

  std::vector<PetriNet> models;
  for (const auto& t : spec.types) {
    if (t.completion_label.empty()) throw Error("type '" + t.name + "' lacks a completion label");
    models.push_back(with_completion(t.net, t.completion_label));
    models.back().name = t.name;
  }

  struct Played {
    std::vector<std::string> labels;
    std::size_t type;
    std::size_t ordinal;
  };
  std::vector<Played> played;
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = 0; j < spec.executions_per_type; ++j) {
      Rng rng(derive_seed(spec.playout_seed, {i, j}));
      played.push_back({playout_labels(models[i], rng, spec.max_len), i, j});
    }
  }
  Rng shuffler(spec.shuffle_seed);
  shuffler.shuffle(played.begin(), played.end());

  Benchmark b;
  for (const auto& p : played) {
    RoutineExecution e;
    e.type_id = p.type;
    for (const auto& l : p.labels) {
      e.actions.push_back(b.alphabet.intern(l));
      b.case_ids.push_back(spec.types[p.type].name + "#" + std::to_string(p.ordinal));
    }
    b.log.actions.insert(b.log.actions.end(), e.actions.begin(), e.actions.end());
    b.executions.push_back(std::move(e));
  }
  for (const auto& m : models) {
    for (const auto& l : m.visible_labels()) b.alphabet.intern(l);
  }

  std::set<Action> finals;
  for (const auto& t : spec.types) finals.insert(b.alphabet.at(t.completion_label));
  b.completion = CompletionSet(finals, b.alphabet.size());
  for (const auto& e : b.executions) {
    const auto inside = std::count_if(e.actions.begin(), e.actions.end(),
                                      [&](Action a) { return b.completion.contains(a); });
    if (inside != 1) {
      throw Error("a completion label occurs inside a routine execution of type '" +
                  spec.types[*e.type_id].name + "'");
    }
  }

  for (std::size_t i = 0; i < models.size(); ++i) {
    ActionSet g;
    for (const auto& l : models[i].visible_labels()) g.insert(b.alphabet.at(l));
    g.insert(b.alphabet.at(spec.types[i].completion_label));
    b.truth.names.push_back(spec.types[i].name);
    b.truth.sets.push_back(std::move(g));
  }
  b.models = std::move(models);
  return b;
}

std::vector<RoutineType> builtin_routine_types(std::size_t n_types, bool shared_prefix,
                                               bool loops) {
  using PT = ProcessTree;
  std::vector<RoutineType> out;
  for (std::size_t i = 0; i < n_types; ++i) {
    const auto name = "R" + std::to_string(i + 1);
    auto a = [&](const char* s) { return PT::activity(name + "_" + s); };
    PT body;
    switch (i % 5) {
      case 0:
        body = PT::sequence({a("open"), PT::choice({a("copy"), a("select")}),
                             PT::parallel({a("paste"), a("format")})});
        break;
      case 1:
        body = PT::sequence({a("open"), a("read"),
                             PT::choice({a("edit"), PT::sequence({a("copy"), a("paste")})}),
                             a("check")});
        break;
      case 2:
        body = PT::sequence({a("login"), PT::parallel({a("name"), a("date"), a("amount")}),
                             PT::choice({a("approve"), a("reject")})});
        break;
      case 3:
        body = loops ? PT::sequence({a("search"), PT::loop(a("scroll")),
                                     PT::choice({a("open"), a("download")}), a("close")})
                     : PT::sequence({a("search"), a("scroll"),
                                     PT::choice({a("open"), a("download")}), a("close")});
        break;
      default:
        body = PT::sequence({PT::choice({a("new"), a("import")}),
                             PT::parallel({a("fill"), PT::sequence({a("attach"), a("sign")})}),
                             a("upload")});
        break;
    }
    if (shared_prefix) body = PT::sequence({PT::activity("open_app"), std::move(body)});
    out.push_back({name, to_petri_net(body, name), name + "_submit"});
  }
  return out;
}

}  // namespace routinelog
