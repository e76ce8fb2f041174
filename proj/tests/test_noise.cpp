#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "routinelog/noise.hpp"
#include "routinelog/segmentation.hpp"
#include "test_util.hpp"

using namespace routinelog;
using testutil::alphabet;
using testutil::exec;
using testutil::seq;

namespace {

NoiseConfig config(double level, std::uint64_t seed, std::vector<Action> pool) {
  NoiseConfig c;
  c.level = level;
  c.seed = seed;
  c.insert_pool = std::move(pool);
  return c;
}

}  // namespace

TEST(Noise, LevelZeroIsIdentity) {
  const auto a = alphabet("a b c F");
  const CompletionSet finals({a.at("F")}, a.size());
  const auto pool = default_insert_pool(a, finals);
  EXPECT_EQ(pool, (std::vector<Action>{0, 1, 2}));
  const auto e = exec(a, "a b c a F");
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_EQ(inject(e, config(0.0, s, pool)), e);
  }
  const UILog log{seq(a, "a b F c F a")};
  EXPECT_EQ(inject_ui_log(log, finals, config(0.0, 3, pool)), log);
}

TEST(Noise, LevelOneNeverCopies) {
  const auto a = alphabet("a b F x");
  const CompletionSet finals({a.at("F")}, a.size());
  const auto cfg = config(1.0, 0, {a.at("x")});
  const auto e = exec(a, "a b F");
  for (std::uint64_t s = 0; s < 10000; ++s) {
    auto c = cfg;
    c.seed = s;
    const auto out = inject(e, c);
    ASSERT_FALSE(out.actions.empty());
    EXPECT_EQ(out.actions.back(), a.at("F"));
    for (std::size_t i = 0; i + 1 < out.actions.size(); ++i) EXPECT_EQ(out.actions[i], a.at("x"));
  }
}

TEST(Noise, TracedOriginsAreConsistent) {
  const auto a = alphabet("a b c d");
  std::vector<Action> pool{0, 1, 2, 3};
  const auto src = seq(a, "a b c d a b c d");
  Rng rng(9);
  NoiseConfig cfg = config(0.4, 0, pool);
  cfg.preserve_finals = false;
  const auto t = inject_traced(src, cfg, rng);
  ASSERT_EQ(t.actions.size(), t.origin.size());
  std::size_t copied = 0;
  std::int64_t last = -1;
  for (std::size_t i = 0; i < t.actions.size(); ++i) {
    if (t.origin[i] == NoisyTrace::kInserted) continue;
    EXPECT_GT(t.origin[i], last);
    last = t.origin[i];
    EXPECT_EQ(t.actions[i], src[static_cast<std::size_t>(t.origin[i])]);
    ++copied;
  }
  EXPECT_EQ(copied + t.skipped, src.size());
}

TEST(Noise, DeterministicAndSeedSensitive) {
  const auto a = alphabet("a b c d e F");
  const CompletionSet finals({a.at("F")}, a.size());
  UILog log;
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) log.actions.push_back(static_cast<Action>(rng.below(6)));
  const auto pool = default_insert_pool(a, finals);
  const auto x = inject_ui_log(log, finals, config(0.3, 5, pool));
  EXPECT_EQ(x, inject_ui_log(log, finals, config(0.3, 5, pool)));
  EXPECT_NE(x, inject_ui_log(log, finals, config(0.3, 6, pool)));
}

TEST(Noise, PreserveFinalsKeepsSegmentCount) {
  const auto a = alphabet("a b c F G");
  const CompletionSet finals({a.at("F"), a.at("G")}, a.size());
  const UILog log{seq(a, "a b F c G a c F b")};
  const auto pool = default_insert_pool(a, finals);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto out = inject_ui_log(log, finals, config(0.5, s, pool));
    const auto seg = segment(out, finals);
    ASSERT_EQ(seg.executions.size(), 3u);
    EXPECT_EQ(seg.executions[0].actions.back(), a.at("F"));
    EXPECT_EQ(seg.executions[1].actions.back(), a.at("G"));
    EXPECT_EQ(seg.executions[2].actions.back(), a.at("F"));
  }
}

TEST(Noise, InjectLogUsesPerExecutionSubSeeds) {
  const auto a = alphabet("a b c F");
  const ExecutionMultiset w{exec(a, "a b F"), exec(a, "c F"), exec(a, "a c b F")};
  const auto cfg = config(0.3, 77, {0, 1, 2});
  const auto out = inject_log(w, cfg);
  ASSERT_EQ(out.size(), 3u);
  for (std::size_t j = 0; j < w.size(); ++j) {
    auto c = cfg;
    c.seed = derive_seed(77, {j});
    EXPECT_EQ(out[j], inject(w[j], c));
  }
  EXPECT_EQ(inject_log(w, config(0.0, 1, {0})), w);
}

// Monte Carlo check of the per-position statistics of the process:
// copy fraction (1-l)/(1-l/2), insertions per position (l/2)/(1-l/2).
TEST(Noise, MonteCarloRates) {
  for (double l : {0.1, 0.2, 0.4}) {
    std::vector<Action> src(20000, 0);
    Rng rng(derive_seed(123, {static_cast<std::uint64_t>(l * 10)}));
    NoiseConfig cfg = config(l, 0, {1});
    cfg.preserve_finals = false;
    const auto t = inject_traced(src, cfg, rng);
    const double copied = static_cast<double>(src.size() - t.skipped) / src.size();
    const double inserted =
        static_cast<double>(std::count(t.origin.begin(), t.origin.end(), NoisyTrace::kInserted)) /
        src.size();
    EXPECT_NEAR(copied, (1 - l) / (1 - 0.5 * l), 0.02) << "l=" << l;
    EXPECT_NEAR(inserted, 0.5 * l / (1 - 0.5 * l), 0.02) << "l=" << l;
  }
}

TEST(Noise, ConfigValidation) {
  EXPECT_THROW(config(1.5, 0, {0}).validate(), Error);
  EXPECT_THROW(config(-0.1, 0, {0}).validate(), Error);
  EXPECT_THROW(config(0.2, 0, {}).validate(), Error);
  EXPECT_NO_THROW(config(0.0, 0, {}).validate());
}
