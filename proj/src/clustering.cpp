#include "routinelog/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace routinelog {

PointSet::PointSet(const FeatureMatrix& m) : PointSet(m.rows(), m.cols()) {
  std::transform(m.data().begin(), m.data().end(), data_.begin(),
                 [](FeatureMatrix::Count c) { return static_cast<double>(c); });
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  PointSet p(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error("ragged point rows");
    std::copy(rows[i].begin(), rows[i].end(), p.row(i).begin());
  }
  return p;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

std::string_view to_string(ClusterMethod m) {
  switch (m) {
    case ClusterMethod::kmeans: return "kmeans";
    case ClusterMethod::dbscan: return "dbscan";
    case ClusterMethod::hdbscan: return "hdbscan";
  }
  return "?";
}

std::string_view to_string(NoisePolicy p) {
  return p == NoisePolicy::nearest_centroid ? "nearest_centroid" : "own_cluster";
}

ClusterMethod parse_cluster_method(std::string_view s) {
  if (s == "kmeans") return ClusterMethod::kmeans;
  if (s == "dbscan") return ClusterMethod::dbscan;
  if (s == "hdbscan") return ClusterMethod::hdbscan;
  throw Error("unknown clustering method '" + std::string(s) + "'");
}

NoisePolicy parse_noise_policy(std::string_view s) {
  if (s == "nearest_centroid") return NoisePolicy::nearest_centroid;
  if (s == "own_cluster") return NoisePolicy::own_cluster;
  throw Error("unknown noise policy '" + std::string(s) + "'");
}

void ClusteringConfig::validate() const {
  switch (method) {
    case ClusterMethod::kmeans:
      if (k == 0) throw Error("kmeans requires k >= 1");
      if (n_init == 0 || max_iter == 0) throw Error("kmeans requires n_init, max_iter >= 1");
      if (!(tol >= 0.0)) throw Error("kmeans tolerance must be nonnegative");
      break;
    case ClusterMethod::dbscan:
      if (!(eps > 0.0)) throw Error("dbscan requires eps > 0");
      if (min_pts == 0) throw Error("dbscan requires min_pts >= 1");
      break;
    case ClusterMethod::hdbscan:
      if (min_cluster_size < 2) throw Error("hdbscan requires min_cluster_size >= 2");
      break;
  }
}

std::size_t ClusterLabeling::cluster_count() const {
  std::set<int> ids;
  for (int l : labels) {
    if (l != kNoise) ids.insert(l);
  }
  return ids.size();
}

std::size_t ClusterLabeling::noise_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

ClusterLabeling resolve_noise(const ClusterLabeling& labeling, const PointSet& points,
                              NoisePolicy policy) {
  const auto n = labeling.labels.size();
  if (n != points.rows()) throw Error("labeling and point set sizes differ");
  int m = 0;
  for (int l : labeling.labels) m = std::max(m, l + 1);

  ClusterLabeling out = labeling;
  if (labeling.noise_count() == 0) return out;
  if (m == 0) {
    std::fill(out.labels.begin(), out.labels.end(), 0);
    return out;
  }
  if (policy == NoisePolicy::own_cluster) {
    for (int& l : out.labels) {
      if (l == ClusterLabeling::kNoise) l = m;
    }
    return out;
  }

  PointSet centroids(static_cast<std::size_t>(m), points.cols());
  std::vector<std::size_t> sizes(static_cast<std::size_t>(m), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const int l = labeling.labels[i];
    if (l == ClusterLabeling::kNoise) continue;
    auto c = centroids.row(static_cast<std::size_t>(l));
    auto p = points.row(i);
    for (std::size_t d = 0; d < p.size(); ++d) c[d] += p[d];
    ++sizes[static_cast<std::size_t>(l)];
  }
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (sizes[c] == 0) continue;
    for (double& x : centroids.row(c)) x /= static_cast<double>(sizes[c]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labeling.labels[i] != ClusterLabeling::kNoise) continue;
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      if (sizes[c] == 0) continue;
      const double d = squared_distance(points.row(i), centroids.row(c));
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    out.labels[i] = best_c;
  }
  return out;
}

ClusterLabeling cluster(const FeatureMatrix& matrix, const ClusteringConfig& config) {
  config.validate();
  const PointSet points(matrix);
  switch (config.method) {
    case ClusterMethod::kmeans:
      return kmeans(points, config.k, config.seed, config.n_init, config.max_iter, config.tol)
          .labeling;
    case ClusterMethod::dbscan:
      return resolve_noise(dbscan(points, config.eps, config.min_pts).labeling, points,
                           config.noise_policy);
    case ClusterMethod::hdbscan:
      return resolve_noise(
          hdbscan(points, config.min_cluster_size, config.allow_single_cluster), points,
          config.noise_policy);
  }
  throw Error("unreachable clustering method");
}

ClusterSet to_cluster_set(const ClusterLabeling& labeling, const ExecutionMultiset& executions) {
  std::vector<std::size_t> labels;
  labels.reserve(labeling.labels.size());
  for (int l : labeling.labels) {
    if (l < 0) throw Error("labeling still contains NOISE labels");
    labels.push_back(static_cast<std::size_t>(l));
  }
  return make_cluster_set(labels, executions);
}

}  // namespace routinelog
