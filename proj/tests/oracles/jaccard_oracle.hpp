#pragma once

// Label-level Jaccard Coefficient and Fitness formulas computed directly from
// their definitions over string sets and hand-supplied alignment costs.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using LabelSet = std::set<std::string>;

inline double jaccard(const LabelSet& a, const LabelSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

/// clusters: one label set per discovered routine log (empty for empty logs)
inline double jc(const std::vector<LabelSet>& clusters, const std::vector<LabelSet>& truth) {
  double sum = 0.0;
  for (const auto& c : clusters) {
    double best = 0.0;
    for (const auto& g : truth) best = std::max(best, jaccard(c, g));
    sum += best;
  }
  return sum / static_cast<double>(clusters.size());
}

/// costs[t]: optimal alignment cost of trace t, lengths[t]: |t|.
inline double log_model_fitness(const std::vector<double>& costs,
                                 const std::vector<std::size_t>& lengths, double c_min) {
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < costs.size(); ++t) {
    num += costs[t];
    den += static_cast<double>(lengths[t]) + c_min;
  }
  return 1.0 - num / den;
}

/// per_log[i][m]: fitness of routine log i against model m; empty rows are
/// empty logs and are skipped.
inline double fitness(const std::vector<std::vector<double>>& per_log) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& row : per_log) {
    if (row.empty()) continue;
    sum += *std::max_element(row.begin(), row.end());
    ++n;
  }
  return sum / static_cast<double>(n);
}

}  // namespace oracle
