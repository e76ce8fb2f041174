#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "routinelog/experiment.hpp"
#include "routinelog/generator.hpp"
#include "routinelog/io.hpp"

using namespace routinelog;

namespace {

ExperimentLog bench_log(std::size_t types, std::size_t per_type, const std::string& name) {
  BenchmarkSpec spec;
  spec.types = builtin_routine_types(types, false, false);
  spec.executions_per_type = per_type;
  auto b = build_ui_log(spec);
  return ExperimentLog{name, b.log, b.alphabet, b.completion, b.truth, b.models};
}

ClusteringConfig method(ClusterMethod m) {
  ClusteringConfig c;
  c.method = m;
  c.eps = 2.0;
  c.min_pts = 5;
  c.min_cluster_size = 10;
  return c;
}

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.logs.push_back(bench_log(3, 20, "b3"));
  plan.noise_levels = {0.0, 0.2};
  plan.repetitions = 3;
  plan.techniques = {Technique::extraction(method(ClusterMethod::kmeans)),
                     Technique::baseline("truth", {{"R1", {"R1_open", "R1_copy", "R1_select", "R1_paste",
                                                           "R1_format", "R1_submit"}},
                                                   {"R2", {"R2_open", "R2_read", "R2_edit", "R2_copy",
                                                           "R2_paste", "R2_check", "R2_submit"}}})};
  plan.master_seed = 4;
  return plan;
}

std::string csv(const std::vector<EvalRecord>& r) {
  std::ostringstream out;
  write_report(out, r);
  return out.str();
}

}  // namespace

TEST(Pipeline, NoiselessDisjointTypesArePerfect) {
  const auto l = bench_log(3, 30, "b");
  for (auto m : {ClusterMethod::kmeans, ClusterMethod::dbscan, ClusterMethod::hdbscan}) {
    auto cfg = method(m);
    cfg.k = 3;
    cfg.min_cluster_size = 16;
    const auto r = run_pipeline(l.log, l.completion, l.alphabet, cfg);
    EXPECT_EQ(r.clusters.size(), 3u) << to_string(m);
    EXPECT_EQ(jaccard_coefficient(r.clusters, l.truth), 1.0);
    EXPECT_EQ(fitness(r.clusters, ModelSet(l.models, l.alphabet)).value, 1.0);
  }
}

TEST(Pipeline, SingleTypeAndEmptyLog) {
  const auto l = bench_log(1, 10, "one");
  auto cfg = method(ClusterMethod::kmeans);
  cfg.k = 1;
  auto r = run_pipeline(l.log, l.completion, l.alphabet, cfg);
  ASSERT_EQ(r.clusters.size(), 1u);
  EXPECT_EQ(r.clusters.logs[0].size(), 10u);
  r = run_pipeline(UILog{}, l.completion, l.alphabet, cfg);
  EXPECT_EQ(r.clusters.size(), 0u);
}

TEST(Experiment, RowCountsAndOrder) {
  auto plan = small_plan();
  plan.logs.push_back(bench_log(2, 10, "b2"));
  plan.noise_levels = {0.0, 0.1, 0.2};
  plan.repetitions = 4;
  const auto rows = run_experiment(plan);
  // logs x techniques x (1 + nonzero levels x repetitions)
  EXPECT_EQ(rows.size(), 2u * 2u * (1u + 2u * 4u));
  std::size_t at_02 = 0;
  for (const auto& r : rows) {
    if (r.log == "b3" && r.technique == "ours" && r.noise_level == 0.2) ++at_02;
  }
  EXPECT_EQ(at_02, 4u);
  EXPECT_EQ(rows[0].log, "b3");
  EXPECT_EQ(rows[0].noise_level, 0.0);
  EXPECT_EQ(rows.back().log, "b2");
}

TEST(Experiment, LevelZeroIsPerfectForOurTechnique) {
  auto plan = small_plan();
  plan.noise_levels = {0.0};
  for (const auto& r : run_experiment(plan)) {
    if (r.technique != "ours") continue;
    EXPECT_TRUE(r.ok()) << r.status;
    EXPECT_EQ(r.jc, 1.0);
    EXPECT_EQ(r.fitness, 1.0);
    EXPECT_EQ(r.empty_pct, 0.0);
  }
}

TEST(Experiment, DeterministicAcrossRunsAndWorkerCounts) {
  auto plan = small_plan();
  const auto a = csv(run_experiment(plan));
  EXPECT_EQ(a, csv(run_experiment(plan)));
  plan.workers = 4;
  EXPECT_EQ(a, csv(run_experiment(plan)));
  plan.master_seed = 5;
  EXPECT_NE(a, csv(run_experiment(plan)));
}

TEST(Experiment, NoiseStreamsIndependentOfTechniques) {
  auto plan = small_plan();
  const auto x = noisy_log(plan, 0, 0.2, 1);
  plan.techniques.push_back(Technique::extraction(method(ClusterMethod::dbscan)));
  EXPECT_EQ(noisy_log(plan, 0, 0.2, 1), x);
  EXPECT_NE(noisy_log(plan, 0, 0.2, 2), x);
  plan.master_seed = 77;
  EXPECT_NE(noisy_log(plan, 0, 0.2, 1), x);
  EXPECT_EQ(noisy_log(plan, 0, 0.0, 0), plan.logs[0].log);
}

TEST(Experiment, FailuresAreRecordedPerRow) {
  auto plan = small_plan();
  plan.techniques.push_back(Technique::baseline("broken", {{"S", {"no_such_label"}}}));
  const auto rows = run_experiment(plan);
  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (r.technique == "baseline:broken") {
      EXPECT_FALSE(r.ok());
      EXPECT_TRUE(std::isnan(r.jc));
      ++failed;
    } else {
      EXPECT_TRUE(r.ok()) << r.status;
    }
  }
  EXPECT_EQ(failed, 4u);
  const auto plot = emit_plot_data(rows, "jc");
  for (const auto& p : plot) {
    if (p.technique == "baseline:broken") {
      EXPECT_EQ(p.summary.n, 0u);
      EXPECT_GT(p.summary.total, 0u);
    }
  }
}

TEST(Experiment, InvalidPlans) {
  auto plan = small_plan();
  plan.noise_levels = {0.0, 1.5};
  EXPECT_THROW(run_experiment(plan), Error);
  plan = small_plan();
  plan.repetitions = 0;
  EXPECT_THROW(plan.validate(), Error);
  plan = small_plan();
  plan.techniques.clear();
  EXPECT_THROW(plan.validate(), Error);
}

TEST(Aggregation, MeansMatchRawRows) {
  auto plan = small_plan();
  plan.noise_levels = {0.0, 0.1, 0.2, 0.3, 0.4};
  const auto rows = run_experiment(plan);
  const auto plot = emit_plot_data(rows, "fitness");
  EXPECT_EQ(plot.size(), 10u);
  for (const auto& p : plot) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
      if (r.technique == p.technique && r.clusterer == p.clusterer && r.noise_level == p.noise_level) {
        sum += r.fitness;
        ++n;
      }
    }
    EXPECT_NEAR(p.summary.mean, sum / n, 1e-12);
    EXPECT_EQ(p.summary.n, n);
    if (p.noise_level == 0.0) EXPECT_EQ(p.summary.stddev, 0.0);
  }
  const auto agg = aggregate_json(rows);
  EXPECT_TRUE(agg.contains("ours/kmeans"));
  EXPECT_TRUE(agg["ours/kmeans"].contains("0.2"));
  EXPECT_NEAR(agg["ours/kmeans"]["0.2"]["fitness"]["mean"].get<double>(),
              [&] {
                for (const auto& p : plot) {
                  if (p.technique == "ours" && p.noise_level == 0.2) return p.summary.mean;
                }
                return -1.0;
              }(),
              1e-12);
  EXPECT_TRUE(per_log_aggregate_json(rows).contains("b3"));

  std::ostringstream out;
  write_plot_csv(out, plot);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "technique,clusterer,noise_level,mean,stddev,n,coverage");
  EXPECT_THROW(emit_plot_data({}, "jc"), Error);
}
