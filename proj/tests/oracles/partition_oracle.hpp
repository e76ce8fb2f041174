#pragma once

// Exhaustive enumeration of all partitions of n points into exactly k
// nonempty blocks (restricted growth strings), returning the minimum SSE.

#include <limits>
#include <vector>

namespace oracle {

inline double partition_sse(const std::vector<std::vector<double>>& pts,
                            const std::vector<int>& block, int k) {
  const std::size_t d = pts.empty() ? 0 : pts[0].size();
  std::vector<std::vector<double>> sum(k, std::vector<double>(d, 0.0));
  std::vector<int> cnt(k, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ++cnt[block[i]];
    for (std::size_t j = 0; j < d; ++j) sum[block[i]][j] += pts[i][j];
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = sum[block[i]][j] / cnt[block[i]];
      sse += (pts[i][j] - c) * (pts[i][j] - c);
    }
  }
  return sse;
}

struct BestPartition {
  double sse = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> argmin;  // all optimal restricted growth strings
};

inline void enumerate(const std::vector<std::vector<double>>& pts, int k, std::vector<int>& rgs,
                      int used, BestPartition& best) {
  const std::size_t i = rgs.size();
  if (i == pts.size()) {
    if (used != k) return;
    const double s = partition_sse(pts, rgs, k);
    if (s < best.sse - 1e-12) {
      best.sse = s;
      best.argmin = {rgs};
    } else if (s <= best.sse + 1e-12) {
      best.argmin.push_back(rgs);
    }
    return;
  }
  if (static_cast<int>(pts.size() - i) < k - used) return;
  for (int b = 0; b <= used && b < k; ++b) {
    rgs.push_back(b);
    enumerate(pts, k, rgs, b == used ? used + 1 : used, best);
    rgs.pop_back();
  }
}

inline BestPartition best_k_partition(const std::vector<std::vector<double>>& pts, int k) {
  BestPartition best;
  std::vector<int> rgs;
  enumerate(pts, k, rgs, 0, best);
  return best;
}

/// Canonical restricted growth string of a labeling.
inline std::vector<int> canonical(const std::vector<int>& labels) {
  std::vector<int> map, out;
  for (int l : labels) {
    if (l >= static_cast<int>(map.size())) map.resize(l + 1, -1);
    if (map[l] < 0) {
      int next = 0;
      for (int m : map) next += m >= 0;
      map[l] = next;
    }
    out.push_back(map[l]);
  }
  return out;
}

}  // namespace oracle
