#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "routinelog/clustering.hpp"

namespace routinelog {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
  std::size_t a;
  std::size_t b;
  double weight;
};

// One row of the condensed tree: `child` (a point id < n, or a cluster id
// >= n) leaves `parent` at density level `lambda`.
struct CondensedRow {
  std::size_t parent;
  std::size_t child;
  double lambda;
  std::size_t size;
};

// lambda_p - lambda_birth where both may be infinite (zero distances).
double lambda_gap(double later, double birth) { return later == birth ? 0.0 : later - birth; }

std::vector<double> core_distances(const PointSet& points, std::size_t min_samples) {
  const std::size_t n = points.rows();
  std::vector<double> core(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = distance(points.row(i), points.row(j));
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(min_samples - 1),
                     row.end());
    core[i] = row[min_samples - 1];
  }
  return core;
}

// Prim's algorithm over the dense mutual-reachability graph.
std::vector<Edge> mutual_reachability_mst(const PointSet& points, const std::vector<double>& core) {
  const std::size_t n = points.rows();
  std::vector<Edge> mst;
  mst.reserve(n - 1);
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, kInf);
  std::vector<std::size_t> from(n, 0);
  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    double next_w = kInf;
    for (std::size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      const double w = std::max({distance(points.row(current), points.row(j)), core[current],
                                 core[j]});
      if (w < best[j]) {
        best[j] = w;
        from[j] = current;
      }
      if (next == n || best[j] < next_w) {
        next_w = best[j];
        next = j;
      }
    }
    in_tree[next] = true;
    mst.push_back({from[next], next, next_w});
    current = next;
  }
  std::stable_sort(mst.begin(), mst.end(),
                   [](const Edge& x, const Edge& y) { return x.weight < y.weight; });
  return mst;
}

struct Dendrogram {
  // Internal node n+k merges children left[k], right[k] at distance[k].
  std::vector<std::size_t> left, right, size;
  std::vector<double> dist;
};

Dendrogram single_linkage(const std::vector<Edge>& mst, std::size_t n) {
  std::vector<std::size_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<std::size_t> sizes(2 * n - 1, 1);
  Dendrogram d;
  for (std::size_t k = 0; k < mst.size(); ++k) {
    const auto ra = find(mst[k].a);
    const auto rb = find(mst[k].b);
    const auto node = n + k;
    d.left.push_back(ra);
    d.right.push_back(rb);
    d.dist.push_back(mst[k].weight);
    sizes[node] = sizes[ra] + sizes[rb];
    d.size.push_back(sizes[node]);
    parent[ra] = node;
    parent[rb] = node;
  }
  return d;
}

std::vector<CondensedRow> condense(const Dendrogram& d, std::size_t n, std::size_t min_size) {
  const std::size_t root = 2 * n - 2;
  auto node_size = [&](std::size_t x) { return x < n ? std::size_t{1} : d.size[x - n]; };
  auto leaves = [&](std::size_t x) {
    std::vector<std::size_t> out, stack{x};
    while (!stack.empty()) {
      const auto y = stack.back();
      stack.pop_back();
      if (y < n) {
        out.push_back(y);
      } else {
        stack.push_back(d.right[y - n]);
        stack.push_back(d.left[y - n]);
      }
    }
    return out;
  };

  std::vector<std::size_t> relabel(2 * n - 1, 0);
  relabel[root] = n;
  std::size_t next_label = n + 1;
  std::vector<CondensedRow> rows;

  // Breadth-first over internal nodes; subtrees that dissolved into points are
  // never enqueued.
  std::vector<std::size_t> queue{root};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const auto node = queue[qi];
    const auto l = d.left[node - n];
    const auto r = d.right[node - n];
    const double lambda = d.dist[node - n] > 0.0 ? 1.0 / d.dist[node - n] : kInf;
    const auto ls = node_size(l);
    const auto rs = node_size(r);
    const auto parent_label = relabel[node];

    auto fall_out = [&](std::size_t sub) {
      for (auto p : leaves(sub)) rows.push_back({parent_label, p, lambda, 1});
    };
    auto keep = [&](std::size_t sub, std::size_t label) {
      relabel[sub] = label;
      if (sub >= n) queue.push_back(sub);
    };

    if (ls >= min_size && rs >= min_size) {
      relabel[l] = next_label++;
      rows.push_back({parent_label, relabel[l], lambda, ls});
      keep(l, relabel[l]);
      relabel[r] = next_label++;
      rows.push_back({parent_label, relabel[r], lambda, rs});
      keep(r, relabel[r]);
    } else if (ls < min_size && rs < min_size) {
      fall_out(l);
      fall_out(r);
    } else if (ls < min_size) {
      fall_out(l);
      keep(r, parent_label);
    } else {
      fall_out(r);
      keep(l, parent_label);
    }
  }
  return rows;
}

}  // namespace

ClusterLabeling hdbscan(const PointSet& points, std::size_t min_cluster_size,
                        bool allow_single_cluster) {
  if (min_cluster_size < 2) throw Error("hdbscan requires min_cluster_size >= 2");
  const std::size_t n = points.rows();
  ClusterLabeling out;
  out.labels.assign(n, ClusterLabeling::kNoise);
  if (n < min_cluster_size || n < 2) return out;

  const auto core = core_distances(points, min_cluster_size);
  const auto tree = condense(single_linkage(mutual_reachability_mst(points, core), n), n,
                             min_cluster_size);

  std::size_t max_label = n;
  for (const auto& row : tree) max_label = std::max({max_label, row.parent, row.child});
  const std::size_t n_clusters = max_label - n + 1;
  auto idx = [&](std::size_t c) { return c - n; };

  // Birth level of every cluster, then excess-of-mass stability.
  std::vector<double> birth(n_clusters, 0.0);
  for (const auto& row : tree) {
    if (row.child >= n) birth[idx(row.child)] = row.lambda;
  }
  std::vector<double> stability(n_clusters, 0.0);
  for (const auto& row : tree) {
    stability[idx(row.parent)] +=
        lambda_gap(row.lambda, birth[idx(row.parent)]) * static_cast<double>(row.size);
  }

  std::vector<std::vector<std::size_t>> children(n_clusters);
  std::vector<std::size_t> parent_of(max_label + 1, max_label + 1);
  std::vector<double> point_lambda(n, 0.0);
  for (const auto& row : tree) {
    parent_of[row.child] = row.parent;
    if (row.child >= n) {
      children[idx(row.parent)].push_back(row.child);
    } else {
      point_lambda[row.child] = row.lambda;
    }
  }

  std::vector<bool> selected(n_clusters, true);
  if (!allow_single_cluster) selected[0] = false;
  for (std::size_t c = max_label + 1; c-- > n;) {
    if (c == n && !allow_single_cluster) break;
    double subtree = 0.0;
    for (auto ch : children[idx(c)]) subtree += stability[idx(ch)];
    if (!children[idx(c)].empty() && subtree > stability[idx(c)]) {
      selected[idx(c)] = false;
      stability[idx(c)] = subtree;
    } else {
      std::vector<std::size_t> stack(children[idx(c)]);
      while (!stack.empty()) {
        const auto s = stack.back();
        stack.pop_back();
        selected[idx(s)] = false;
        stack.insert(stack.end(), children[idx(s)].begin(), children[idx(s)].end());
      }
    }
  }

  std::vector<int> label_of(n_clusters, ClusterLabeling::kNoise);
  int next = 0;
  std::size_t selected_count = 0;
  for (std::size_t c = 0; c < n_clusters; ++c) {
    if (selected[c]) {
      label_of[c] = next++;
      ++selected_count;
    }
  }

  double root_threshold = 0.0;
  for (const auto& row : tree) {
    if (row.parent == n) root_threshold = std::max(root_threshold, row.lambda);
  }
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t c = parent_of[p];
    while (c != n && !selected[idx(c)]) c = parent_of[c];
    if (c != n) {
      out.labels[p] = label_of[idx(c)];
    } else if (selected[0] && selected_count == 1 && point_lambda[p] >= root_threshold) {
      out.labels[p] = label_of[0];
    }
  }
  return out;
}

}  // namespace routinelog
