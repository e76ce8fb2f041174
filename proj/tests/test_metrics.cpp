#include <gtest/gtest.h>

#include <random>

#include "oracles/jaccard_oracle.hpp"
#include "routinelog/metrics.hpp"
#include "test_util.hpp"

using namespace routinelog;
using testutil::alphabet;
using testutil::exec;

namespace {

ActionSet aset(const ActionAlphabet& a, const std::string& labels) {
  const auto s = testutil::seq(a, labels);
  return ActionSet(s.begin(), s.end());
}

}  // namespace

TEST(Metrics, ActionSet) {
  const auto a = alphabet("a b c");
  EXPECT_EQ(action_set(RoutineLog{{exec(a, "a b"), exec(a, "a")}}), aset(a, "a b"));
  EXPECT_TRUE(action_set(RoutineLog{}).empty());
  EXPECT_EQ(action_set(RoutineLog{{exec(a, "a a a")}}), aset(a, "a"));
}

TEST(Metrics, JaccardExamples) {
  const auto a = alphabet("a b c");
  const GroundTruthActionSets truth{{"G1", "G2"}, {aset(a, "a b c"), aset(a, "b")}};
  ClusterSet cs;
  cs.logs = {RoutineLog{{exec(a, "a b")}}};
  EXPECT_NEAR(jaccard_coefficient(cs, truth), 2.0 / 3.0, 1e-12);
  cs.logs = {RoutineLog{}};
  EXPECT_EQ(jaccard_coefficient(cs, truth), 0.0);
  cs.logs = {RoutineLog{{exec(a, "a b c")}}, RoutineLog{{exec(a, "b b")}}};
  EXPECT_EQ(jaccard_coefficient(cs, truth), 1.0);
  EXPECT_THROW(jaccard_coefficient(ClusterSet{}, truth), Error);
}

TEST(Metrics, FitnessExamples) {
  const auto a = alphabet("a b");
  std::vector<PetriNet> nets{testutil::sequence_net("a b"), testutil::sequence_net("a")};
  const ModelSet models(nets, a);
  ClusterSet cs;
  cs.logs = {RoutineLog{{exec(a, "a")}}};
  EXPECT_EQ(fitness(cs, models).value, 1.0);

  const ModelSet only_ab(std::vector<PetriNet>{testutil::sequence_net("a b")}, a);
  EXPECT_NEAR(fitness(cs, only_ab).value, 2.0 / 3.0, 1e-12);

  cs.logs = {RoutineLog{{exec(a, "a b"), exec(a, "a b")}}, RoutineLog{}};
  const auto f = fitness(cs, models);
  EXPECT_EQ(f.value, 1.0);
  EXPECT_EQ(f.excluded, 1u);
  cs.logs = {RoutineLog{}, RoutineLog{}};
  EXPECT_THROW(fitness(cs, models), Error);
}

TEST(Metrics, EmptyLogPct) {
  ClusterSet cs;
  const auto a = alphabet("a");
  cs.logs = {RoutineLog{{exec(a, "a")}}, RoutineLog{{exec(a, "a")}}};
  EXPECT_EQ(empty_log_pct(cs), 0.0);
  cs.logs.push_back(RoutineLog{});
  cs.logs.push_back(RoutineLog{{exec(a, "a")}});
  EXPECT_EQ(empty_log_pct(cs), 25.0);
  cs.logs = {RoutineLog{}, RoutineLog{}};
  EXPECT_EQ(empty_log_pct(cs), 100.0);
}

TEST(Metrics, BinaryVectorExample) {
  const auto a = alphabet("A B C D E");
  EXPECT_EQ(binary_vector(aset(a, "A C D"), a.size()), (std::vector<double>{1, 0, 1, 1, 0}));
}

TEST(Metrics, BaselineAssign) {
  const auto a = alphabet("A B C D E");
  const GroundTruthActionSets sets{{"T1", "T2"}, {aset(a, "A C D"), aset(a, "B E")}};
  auto cs = baseline_assign({exec(a, "A C D")}, sets, a);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs.logs[0].size(), 1u);
  EXPECT_TRUE(cs.logs[1].empty());

  const GroundTruthActionSets nested{{"S1", "S2"}, {aset(a, "A B"), aset(a, "A B C D")}};
  cs = baseline_assign({exec(a, "A B C D"), exec(a, "A C D B")}, nested, a);
  EXPECT_TRUE(cs.logs[0].empty());
  EXPECT_EQ(cs.logs[1].size(), 2u);
  EXPECT_EQ(empty_log_pct(cs), 50.0);

  // equidistant: tie goes to the lowest index
  const GroundTruthActionSets tie{{"X", "Y"}, {aset(a, "A"), aset(a, "B")}};
  cs = baseline_assign({exec(a, "C")}, tie, a);
  EXPECT_EQ(cs.logs[0].size(), 1u);
}

// Twenty constructed instances compared against the label-level formulas.
TEST(Metrics, FormulaFidelity) {
  const auto a = alphabet("a b c d e f g");
  std::mt19937_64 rng(31);
  for (int it = 0; it < 20; ++it) {
    std::vector<oracle::LabelSet> truth_l;
    GroundTruthActionSets truth;
    const int n_truth = 1 + static_cast<int>(rng() % 3);
    for (int g = 0; g < n_truth; ++g) {
      oracle::LabelSet s;
      ActionSet as;
      for (Action x = 0; x < a.size(); ++x) {
        if (rng() % 2 || (s.empty() && x + 1 == a.size())) {
          s.insert(a.label(x));
          as.insert(x);
        }
      }
      truth_l.push_back(s);
      truth.names.push_back("G" + std::to_string(g));
      truth.sets.push_back(as);
    }
    ClusterSet cs;
    std::vector<oracle::LabelSet> cl;
    const int n_cl = 1 + static_cast<int>(rng() % 4);
    for (int c = 0; c < n_cl; ++c) {
      RoutineLog log;
      oracle::LabelSet s;
      const int n_exec = static_cast<int>(rng() % 3);
      for (int e = 0; e < n_exec; ++e) {
        RoutineExecution ex;
        for (int k = 0, len = 1 + static_cast<int>(rng() % 4); k < len; ++k) {
          const auto x = static_cast<Action>(rng() % a.size());
          ex.actions.push_back(x);
          s.insert(a.label(x));
        }
        log.executions.push_back(ex);
      }
      cs.logs.push_back(log);
      cl.push_back(s);
    }
    EXPECT_NEAR(jaccard_coefficient(cs, truth), oracle::jc(cl, truth_l), 1e-12);
  }
}
