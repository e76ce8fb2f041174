#include <deque>

#include "routinelog/clustering.hpp"

namespace routinelog {

DbscanResult dbscan(const PointSet& points, double eps, std::size_t min_pts) {
  if (!(eps > 0.0)) throw Error("dbscan requires eps > 0");
  if (min_pts == 0) throw Error("dbscan requires min_pts >= 1");

  constexpr int kUnvisited = -2;
  const std::size_t n = points.rows();
  const double eps2 = eps * eps;
  DbscanResult r;
  r.labeling.labels.assign(n, kUnvisited);
  r.core.assign(n, false);

  auto region = [&](std::size_t p) {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < n; ++q) {
      if (squared_distance(points.row(p), points.row(q)) <= eps2) out.push_back(q);
    }
    return out;
  };

  int next_cluster = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (r.labeling.labels[p] != kUnvisited) continue;
    auto neighbours = region(p);
    if (neighbours.size() < min_pts) {
      r.labeling.labels[p] = ClusterLabeling::kNoise;
      continue;
    }
    r.core[p] = true;
    const int c = next_cluster++;
    r.labeling.labels[p] = c;
    std::deque<std::size_t> frontier(neighbours.begin(), neighbours.end());
    while (!frontier.empty()) {
      const auto q = frontier.front();
      frontier.pop_front();
      if (r.labeling.labels[q] == ClusterLabeling::kNoise) {
        r.labeling.labels[q] = c;  // border point
        continue;
      }
      if (r.labeling.labels[q] != kUnvisited) continue;
      r.labeling.labels[q] = c;
      auto reach = region(q);
      if (reach.size() >= min_pts) {
        r.core[q] = true;
        frontier.insert(frontier.end(), reach.begin(), reach.end());
      }
    }
  }
  return r;
}

}  // namespace routinelog
