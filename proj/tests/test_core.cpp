#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles/segment_oracle.hpp"
#include "routinelog/core.hpp"
#include "routinelog/encoding.hpp"
#include "routinelog/segmentation.hpp"
#include "test_util.hpp"

using namespace routinelog;
using testutil::alphabet;
using testutil::exec;
using testutil::seq;
using testutil::words;

TEST(Alphabet, DeduplicatesInFirstOccurrenceOrder) {
  const auto a = alphabet("a b a c");
  EXPECT_EQ(a.labels(), words("a b c"));
  EXPECT_EQ(alphabet("save").labels(), words("save"));
}

TEST(Alphabet, IndexIsZeroBased) {
  const auto a = alphabet("x y z");
  EXPECT_EQ(a.at("y"), 1u);
  EXPECT_EQ(a.label(2), "z");
  EXPECT_FALSE(a.find("w").has_value());
  EXPECT_THROW(a.at("w"), Error);
}

TEST(Alphabet, EmptyInputIsRejected) {
  EXPECT_THROW(ActionAlphabet::build({}), Error);
  const std::vector<std::string> blank{"a", ""};
  EXPECT_THROW(ActionAlphabet::build(blank), Error);
}

TEST(Alphabet, LabelRoundTrip) {
  const auto a = alphabet("open copy paste save");
  const auto s = seq(a, "copy copy save open paste");
  EXPECT_EQ(a.to_actions(a.to_labels(s)), s);
}

TEST(CompletionSet, MustBeNonemptyStrictSubset) {
  EXPECT_THROW(CompletionSet({}, 3), Error);
  EXPECT_THROW(CompletionSet({0, 1, 2}, 3), Error);
  EXPECT_THROW(CompletionSet({5}, 3), Error);
  EXPECT_NO_THROW(CompletionSet({2}, 3));
}

TEST(ClusterSet, MakeAndPartitionLaw) {
  const auto a = alphabet("a b c F");
  const ExecutionMultiset w{exec(a, "a F"), exec(a, "b F"), exec(a, "a F")};
  const std::vector<std::size_t> labels{0, 1, 0};
  const auto cs = make_cluster_set(labels, w);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs.logs[0].size(), 2u);
  EXPECT_EQ(cs.logs[1].size(), 1u);
  EXPECT_TRUE(cs.is_partition_of(w));
  const auto padded = make_cluster_set(labels, w, 4);
  EXPECT_EQ(padded.size(), 4u);
  EXPECT_EQ(padded.empty_count(), 2u);
  EXPECT_TRUE(padded.is_partition_of(w));
  const ExecutionMultiset other{exec(a, "a F"), exec(a, "c F"), exec(a, "a F")};
  EXPECT_FALSE(cs.is_partition_of(other));
}

// ------------------------------------------------------------ segmentation

namespace {

struct SegCase {
  ActionAlphabet a = alphabet("a b c F G");
  CompletionSet finals{{a.at("F"), a.at("G")}, a.size()};
};

}  // namespace

TEST(Segmentation, SpecExamples) {
  SegCase c;
  auto s = segment(UILog{seq(c.a, "a b F c F")}, c.finals);
  ASSERT_EQ(s.executions.size(), 2u);
  EXPECT_EQ(s.executions[0], exec(c.a, "a b F"));
  EXPECT_EQ(s.executions[1], exec(c.a, "c F"));
  EXPECT_TRUE(s.remainder.empty());

  s = segment(UILog{seq(c.a, "F F")}, c.finals);
  ASSERT_EQ(s.executions.size(), 2u);
  EXPECT_EQ(s.executions[0], exec(c.a, "F"));

  s = segment(UILog{seq(c.a, "a F b")}, c.finals);
  ASSERT_EQ(s.executions.size(), 1u);
  EXPECT_EQ(s.executions[0], exec(c.a, "a F"));
  EXPECT_EQ(s.remainder, seq(c.a, "b"));
}

TEST(Segmentation, DegenerateLogs) {
  SegCase c;
  auto s = segment(UILog{}, c.finals);
  EXPECT_TRUE(s.executions.empty());
  EXPECT_FALSE(s.no_completion_found);
  s = segment(UILog{seq(c.a, "a b c")}, c.finals);
  EXPECT_TRUE(s.executions.empty());
  EXPECT_TRUE(s.no_completion_found);
  EXPECT_EQ(s.remainder, seq(c.a, "a b c"));
}

TEST(Segmentation, MatchesBruteForceSplitter) {
  SegCase c;
  std::mt19937_64 rng(7);
  const std::set<std::string> finals{"F", "G"};
  for (int it = 0; it < 400; ++it) {
    const std::size_t n = rng() % 11;
    std::vector<std::string> labels(n);
    for (auto& l : labels) l = c.a.label(static_cast<Action>(rng() % c.a.size()));
    const auto valid = oracle::all_valid_splits(labels, finals);
    ASSERT_EQ(valid.size(), 1u) << "the decomposition is unique";
    const auto s = segment(UILog{c.a.to_actions(labels)}, c.finals);
    ASSERT_EQ(s.executions.size(), valid[0].segments.size());
    for (std::size_t k = 0; k < s.executions.size(); ++k) {
      EXPECT_EQ(c.a.to_labels(s.executions[k].actions), valid[0].segments[k]);
    }
    EXPECT_EQ(c.a.to_labels(s.remainder), valid[0].remainder);
  }
}

TEST(Segmentation, Validation) {
  SegCase c;
  const UILog log{seq(c.a, "a b F c G a")};
  const auto s = segment(log, c.finals);
  EXPECT_TRUE(validate_segmentation(s.executions, log, c.finals, s.remainder));
  EXPECT_FALSE(validate_segmentation(s.executions, log, c.finals));

  const ExecutionMultiset mid{exec(c.a, "a F b F")};
  EXPECT_FALSE(validate_segmentation(mid, UILog{seq(c.a, "a F b F")}, c.finals));
  const ExecutionMultiset reordered{s.executions[1], s.executions[0]};
  EXPECT_FALSE(validate_segmentation(reordered, log, c.finals, s.remainder));
}

// ---------------------------------------------------------------- encoding

TEST(Encoding, WorkedExample) {
  const auto a = alphabet("a b c");
  const ExecutionMultiset w{exec(a, "a b"), exec(a, "a c c"), exec(a, "b c")};
  const auto m = encode(w, a);
  ASSERT_EQ(m.rows(), 3u);
  ASSERT_EQ(m.cols(), 3u);
  const std::vector<std::int64_t> expected{1, 1, 0, 1, 0, 2, 0, 1, 1};
  EXPECT_EQ(m.data(), expected);
}

TEST(Encoding, EdgeCases) {
  const auto a = alphabet("a");
  const auto m = encode({exec(a, "a a a")}, a);
  EXPECT_EQ(m.at(0, 0), 3);
  EXPECT_EQ(encode({}, a).rows(), 0u);
  const ExecutionMultiset bad{RoutineExecution{{0, 4}, std::nullopt}};
  EXPECT_THROW(encode(bad, a), Error);
}

TEST(Encoding, RowSumsEqualLengths) {
  const auto a = alphabet("a b c d");
  std::mt19937_64 rng(3);
  ExecutionMultiset w;
  for (int i = 0; i < 50; ++i) {
    RoutineExecution e;
    for (std::size_t k = 0, n = 1 + rng() % 9; k < n; ++k) e.actions.push_back(rng() % 4);
    w.push_back(e);
  }
  const auto m = encode(w, a);
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::int64_t sum = 0;
    for (auto v : m.row(i)) sum += v;
    EXPECT_EQ(sum, static_cast<std::int64_t>(w[i].size()));
  }
}
