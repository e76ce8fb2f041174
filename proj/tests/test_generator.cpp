#include <gtest/gtest.h>

#include <algorithm>

#include "routinelog/alignment.hpp"
#include "routinelog/generator.hpp"
#include "routinelog/segmentation.hpp"
#include "test_util.hpp"

using namespace routinelog;
using PT = ProcessTree;

TEST(Playout, SequenceNetIsDeterministic) {
  const auto net = with_completion(to_petri_net(PT::sequence({PT::activity("a"), PT::activity("b")}), "s"), "F");
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    EXPECT_EQ(playout_labels(net, rng, 10), testutil::words("a b F"));
  }
}

TEST(Playout, XorBranchFrequencies) {
  const auto net = with_completion(to_petri_net(PT::choice({PT::activity("a"), PT::activity("b")}), "x"), "F");
  std::size_t a = 0;
  const std::size_t n = 10000;
  for (std::uint64_t s = 0; s < n; ++s) {
    Rng rng(derive_seed(5, {s}));
    const auto out = playout_labels(net, rng, 10);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[1], "F");
    a += out[0] == "a";
  }
  EXPECT_NEAR(static_cast<double>(a) / n, 0.5, 0.02);
}

TEST(Playout, Errors) {
  auto net = testutil::sequence_net("a b");
  net.set_final(Marking{{0, 0, 2}});
  Rng rng(1);
  EXPECT_THROW(playout_labels(net, rng, 10), Error);
  const auto loop = to_petri_net(PT::loop(PT::activity("a")), "l");
  std::size_t capped = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng r(s);
    try {
      EXPECT_LE(playout_labels(loop, r, 3).size(), 3u);
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find("playout cap"), std::string::npos);
      ++capped;
    }
  }
  EXPECT_GT(capped, 0u);
}

TEST(Generator, WithCompletionIsIdempotent) {
  const auto net = with_completion(testutil::sequence_net("a b"), "F");
  EXPECT_EQ(net.transitions().back().label, std::optional<std::string>("F"));
  const auto again = with_completion(net, "F");
  EXPECT_EQ(again.transitions().size(), net.transitions().size());
}

TEST(Generator, BuildUiLogRecoversExecutions) {
  BenchmarkSpec spec;
  spec.types = builtin_routine_types(3);
  spec.executions_per_type = 1;
  auto b = build_ui_log(spec);
  auto seg = segment(b.log, b.completion);
  ASSERT_EQ(seg.executions.size(), 3u);
  EXPECT_EQ(seg.executions, b.executions);
  EXPECT_TRUE(seg.remainder.empty());

  spec.types = builtin_routine_types(2);
  spec.executions_per_type = 50;
  b = build_ui_log(spec);
  seg = segment(b.log, b.completion);
  EXPECT_EQ(seg.executions.size(), 100u);
  EXPECT_EQ(b.case_ids.size(), b.log.size());
}

TEST(Generator, ShuffleSeedPermutesOnly) {
  BenchmarkSpec spec;
  spec.types = builtin_routine_types(3);
  spec.executions_per_type = 20;
  const auto x = build_ui_log(spec);
  spec.shuffle_seed = 99;
  const auto y = build_ui_log(spec);
  EXPECT_NE(x.log, y.log);
  auto sorted = [](const Benchmark& b) {
    std::vector<std::vector<std::string>> out;
    for (const auto& e : segment(b.log, b.completion).executions) out.push_back(b.alphabet.to_labels(e.actions));
    std::sort(out.begin(), out.end());
    return out;
  };
  EXPECT_EQ(sorted(x), sorted(y));
}

TEST(Generator, PlayoutsFitTheirModels) {
  BenchmarkSpec spec;
  spec.types = builtin_routine_types(5, true);
  spec.executions_per_type = 20;
  const auto b = build_ui_log(spec);
  for (std::size_t i = 0; i < b.models.size(); ++i) {
    const Aligner al(b.models[i], b.alphabet);
    for (const auto& e : b.executions) {
      if (e.type_id == i) EXPECT_EQ(al.cost(e.actions), 0.0);
    }
    const auto labels = b.models[i].visible_labels();
    EXPECT_EQ(b.truth.sets[i].size(), labels.size());
  }
  EXPECT_TRUE(b.alphabet.find("open_app").has_value());
}

TEST(Generator, InvalidSpecs) {
  BenchmarkSpec spec;
  EXPECT_THROW(build_ui_log(spec), Error);
  spec.types = builtin_routine_types(1);
  spec.executions_per_type = 0;
  EXPECT_THROW(build_ui_log(spec), Error);
}
