#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "routinelog/core.hpp"
#include "routinelog/encoding.hpp"

namespace routinelog {

/// Row-major real-valued points. Count vectors are widened to double here.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit PointSet(const FeatureMatrix& m);
  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

enum class ClusterMethod { kmeans, dbscan, hdbscan };
enum class NoisePolicy { nearest_centroid, own_cluster };

std::string_view to_string(ClusterMethod m);
std::string_view to_string(NoisePolicy p);
ClusterMethod parse_cluster_method(std::string_view s);
NoisePolicy parse_noise_policy(std::string_view s);

struct ClusteringConfig {
  ClusterMethod method = ClusterMethod::kmeans;
  std::size_t k = 0;  // kmeans; 0 means "not supplied"
  double eps = 0.5;
  std::size_t min_pts = 5;
  std::size_t min_cluster_size = 5;
  bool allow_single_cluster = false;
  std::uint64_t seed = 0;
  NoisePolicy noise_policy = NoisePolicy::nearest_centroid;
  // k-means solver settings
  std::size_t n_init = 10;
  std::size_t max_iter = 300;
  double tol = 1e-4;

  /// Throws Error when the parameters required by `method` are missing or
  /// out of range.
  void validate() const;
};

/// Per-row cluster labels; kNoise marks rows a density method left unassigned.
struct ClusterLabeling {
  static constexpr int kNoise = -1;
  std::vector<int> labels;

  std::size_t cluster_count() const;
  std::size_t noise_count() const;
  bool resolved() const { return noise_count() == 0; }
};

struct KMeansResult {
  ClusterLabeling labeling;
  PointSet centroids;
  double sse = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Objective after each assignment step of the winning restart.
  std::vector<double> sse_history;
};

/// Lloyd's algorithm with k-means++ seeding; the best of `n_init` restarts by
/// SSE is kept. Deterministic for a fixed seed.
KMeansResult kmeans(const PointSet& points, std::size_t k, std::uint64_t seed,
                    std::size_t n_init = 10, std::size_t max_iter = 300, double tol = 1e-4);

struct DbscanResult {
  ClusterLabeling labeling;
  std::vector<bool> core;
};

/// Density-based clustering. Neighbourhoods include the point itself and use
/// distance <= eps. Border points join the first cluster that reaches them.
DbscanResult dbscan(const PointSet& points, double eps, std::size_t min_pts);

/// Hierarchical density clustering with excess-of-mass cluster extraction.
/// min_samples equals min_cluster_size. With fewer rows than
/// min_cluster_size every row is noise.
ClusterLabeling hdbscan(const PointSet& points, std::size_t min_cluster_size,
                        bool allow_single_cluster = false);

/// Folds NOISE rows into clusters. nearest_centroid moves each noise row to
/// the cluster whose centroid is closest (ties: lowest index); own_cluster
/// collects all noise rows into one extra cluster. When every row is noise
/// the result is a single cluster. Input cluster ids must be 0..m-1; the
/// extra own_cluster id is m.
ClusterLabeling resolve_noise(const ClusterLabeling& labeling, const PointSet& points,
                              NoisePolicy policy);

/// Runs the configured method and resolves noise.
ClusterLabeling cluster(const FeatureMatrix& matrix, const ClusteringConfig& config);

/// Turns a resolved labeling into routine logs (ascending label order).
ClusterSet to_cluster_set(const ClusterLabeling& labeling, const ExecutionMultiset& executions);

}  // namespace routinelog
