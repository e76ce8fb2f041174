#include <algorithm>
#include <limits>

#include "routinelog/clustering.hpp"
#include "routinelog/rng.hpp"

namespace routinelog {
namespace {

PointSet plus_plus_seeding(const PointSet& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  PointSet centers(k, points.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t pick = rng.below(n);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy(points.row(pick).begin(), points.row(pick).end(), centers.row(c).begin());
    if (c + 1 == k) break;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points.row(i), centers.row(c)));
      total += d2[i];
    }
    if (total <= 0.0) {
      pick = rng.below(n);
      continue;
    }
    const double target = rng.uniform01() * total;
    double acc = 0.0;
    pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      acc += d2[i];
      if (acc > target && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
  }
  return centers;
}

// Assigns every point to its nearest center (ties to the lowest index) and
// returns the objective.
double assign(const PointSet& points, const PointSet& centers, std::vector<int>& labels,
              std::vector<double>& dist) {
  double sse = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (std::size_t c = 0; c < centers.rows(); ++c) {
      const double d = squared_distance(points.row(i), centers.row(c));
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    labels[i] = best_c;
    dist[i] = best;
    sse += best;
  }
  return sse;
}

KMeansResult lloyd(const PointSet& points, PointSet centers, std::size_t max_iter, double tol) {
  const std::size_t n = points.rows();
  const std::size_t k = centers.rows();
  const std::size_t dims = points.cols();
  KMeansResult r;
  r.labeling.labels.assign(n, 0);
  std::vector<double> dist(n, 0.0);
  std::vector<std::size_t> sizes(k);

  for (std::size_t it = 0; it < max_iter; ++it) {
    r.sse_history.push_back(assign(points, centers, r.labeling.labels, dist));
    r.iterations = it + 1;

    PointSet next(k, dims);
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(r.labeling.labels[i]);
      auto row = next.row(c);
      auto p = points.row(i);
      for (std::size_t d = 0; d < dims; ++d) row[d] += p[d];
      ++sizes[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] > 0) {
        for (double& x : next.row(c)) x /= static_cast<double>(sizes[c]);
        continue;
      }
      // Empty cluster: move it onto the point farthest from its center, if
      // any point is not already sitting on one.
      auto far = std::max_element(dist.begin(), dist.end());
      if (far == dist.end() || *far <= 0.0) {
        std::copy(centers.row(c).begin(), centers.row(c).end(), next.row(c).begin());
        continue;
      }
      const auto i = static_cast<std::size_t>(far - dist.begin());
      std::copy(points.row(i).begin(), points.row(i).end(), next.row(c).begin());
      *far = 0.0;
    }

    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      shift = std::max(shift, distance(centers.row(c), next.row(c)));
    }
    centers = std::move(next);
    if (shift <= tol) {
      r.converged = true;
      break;
    }
  }
  r.sse = assign(points, centers, r.labeling.labels, dist);
  r.sse_history.push_back(r.sse);
  r.centroids = std::move(centers);
  return r;
}

// Renumbers labels to 0..m-1 in ascending order of the original ids, dropping
// centers that ended up with no points.
void compact(KMeansResult& r) {
  const std::size_t k = r.centroids.rows();
  std::vector<int> remap(k, -1);
  std::vector<bool> used(k, false);
  for (int l : r.labeling.labels) used[static_cast<std::size_t>(l)] = true;
  std::size_t m = 0;
  for (std::size_t c = 0; c < k; ++c) {
    if (used[c]) remap[c] = static_cast<int>(m++);
  }
  if (m == k) return;
  PointSet kept(m, r.centroids.cols());
  for (std::size_t c = 0; c < k; ++c) {
    if (remap[c] < 0) continue;
    auto src = r.centroids.row(c);
    std::copy(src.begin(), src.end(), kept.row(static_cast<std::size_t>(remap[c])).begin());
  }
  for (int& l : r.labeling.labels) l = remap[static_cast<std::size_t>(l)];
  r.centroids = std::move(kept);
}

}  // namespace

KMeansResult kmeans(const PointSet& points, std::size_t k, std::uint64_t seed, std::size_t n_init,
                    std::size_t max_iter, double tol) {
  if (k == 0) throw Error("kmeans requires k >= 1");
  if (k > points.rows()) {
    throw Error("kmeans requires k <= number of rows (k=" + std::to_string(k) +
                ", rows=" + std::to_string(points.rows()) + ")");
  }
  if (n_init == 0 || max_iter == 0) throw Error("kmeans requires n_init, max_iter >= 1");

  KMeansResult best;
  bool have_best = false;
  for (std::size_t run = 0; run < n_init; ++run) {
    Rng rng(derive_seed(seed, {run}));
    auto r = lloyd(points, plus_plus_seeding(points, k, rng), max_iter, tol);
    if (!have_best || r.sse < best.sse) {
      best = std::move(r);
      have_best = true;
    }
  }
  compact(best);
  return best;
}

}  // namespace routinelog
