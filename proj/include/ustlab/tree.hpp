#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ustlab {

// Rooted spanning tree as a parent array; parent[root] = -1.
struct SpanningTree {
  int root = 0;
  std::vector<int> parent;

  int n() const { return static_cast<int>(parent.size()); }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(parent.empty() ? 0 : parent.size() - 1);
    for (int v = 0; v < n(); ++v)
      if (v != root) out.emplace_back(v, parent[v]);
    return out;
  }

  // Canonical key: sorted list of (min, max) endpoint pairs.
  std::vector<std::pair<int, int>> canonical_edges() const {
    auto es = edges();
    for (auto& [u, v] : es)
      if (u > v) std::swap(u, v);
    std::sort(es.begin(), es.end());
    return es;
  }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(n());
    for (auto [u, v] : edges()) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    return adj;
  }
};

// Unique u-v path in the tree, as a vertex sequence from u to v.
inline std::vector<int> tree_path(const SpanningTree& t, int u, int v) {
  const int n = t.n();
  if (u < 0 || u >= n || v < 0 || v >= n) throw std::invalid_argument("tree_path: vertex out of range");
  std::vector<int> on_u_path(n, 0);
  for (int x = u;; x = t.parent[x]) {
    on_u_path[x] = 1;
    if (x == t.root) break;
  }
  std::vector<int> from_v;
  int meet = v;
  while (!on_u_path[meet]) {
    from_v.push_back(meet);
    meet = t.parent[meet];
  }
  std::vector<int> path;
  for (int x = u; x != meet; x = t.parent[x]) path.push_back(x);
  path.push_back(meet);
  for (auto it = from_v.rbegin(); it != from_v.rend(); ++it) path.push_back(*it);
  return path;
}

namespace detail {

inline std::pair<int, int> farthest_from(const std::vector<std::vector<int>>& adj, int src) {
  std::vector<int> dist(adj.size(), -1);
  std::vector<int> queue{src};
  dist[src] = 0;
  int far = src;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    if (dist[v] > dist[far]) far = v;
    for (int u : adj[v])
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
  }
  return {far, dist[far]};
}

}  // namespace detail

// Exact diameter (edge count) via double BFS sweep; exact on trees.
inline int tree_diameter(const SpanningTree& t) {
  if (t.n() <= 1) return 0;
  const auto adj = t.adjacency();
  const auto [a, d0] = detail::farthest_from(adj, t.root);
  const auto [b, d1] = detail::farthest_from(adj, a);
  (void)b;
  (void)d0;
  return d1;
}

}  // namespace ustlab
