#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ustlab/vertex_set.hpp"

namespace ustlab {

// Simple undirected graph: sorted neighbor lists plus an n x n adjacency
// bitmap for O(1) membership tests when n <= kBitmapLimit (2 MB at 4096).
// No self-loops, no parallel edges.
class Graph {
 public:
  static constexpr int kBitmapLimit = 4096;

  Graph() = default;

  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
    Graph g;
    g.n_ = n;
    g.adj_.assign(n, {});
    for (auto [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw std::invalid_argument("Graph: endpoint out of range");
      if (u == v) throw std::invalid_argument("Graph: self-loop rejected");
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    for (int v = 0; v < n; ++v) {
      auto& a = g.adj_[v];
      std::sort(a.begin(), a.end());
      if (std::adjacent_find(a.begin(), a.end()) != a.end())
        throw std::invalid_argument("Graph: duplicate edge rejected");
    }
    g.m_ = edges.size();
    g.build_bitmap();
    return g;
  }

  int n() const { return n_; }
  std::size_t m() const { return m_; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  std::span<const int> neighbors(int v) const { return adj_[v]; }

  bool has_edge(int u, int v) const {
    if (u == v) return false;
    if (!bitmap_.empty())
      return (bitmap_[static_cast<std::size_t>(u) * words_ + (v >> 6)] >> (v & 63)) & 1u;
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(m_);
    for (int u = 0; u < n_; ++u)
      for (int v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  int min_degree() const {
    int d = n_ == 0 ? 0 : degree(0);
    for (int v = 1; v < n_; ++v) d = std::min(d, degree(v));
    return d;
  }

  // Number of neighbors of v inside s.
  int deg_into(int v, const VertexSet& s) const {
    if (!bitmap_.empty()) {
      const std::uint64_t* row = &bitmap_[static_cast<std::size_t>(v) * words_];
      int c = 0;
      for (std::size_t i = 0; i < s.words().size(); ++i)
        c += std::popcount(row[i] & s.words()[i]);
      return c;
    }
    int c = 0;
    for (int u : adj_[v]) c += s.contains(u);
    return c;
  }

  std::uint64_t volume(const VertexSet& s) const {
    std::uint64_t vol = 0;
    for (std::size_t i = 0; i < s.words().size(); ++i) {
      std::uint64_t w = s.words()[i];
      while (w) {
        vol += degree(static_cast<int>(i * 64 + std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return vol;
  }

  // |edges with exactly one endpoint in s|.
  std::uint64_t edge_boundary(const VertexSet& s) const {
    std::uint64_t vol = 0, inside = 0;
    for (std::size_t i = 0; i < s.words().size(); ++i) {
      std::uint64_t w = s.words()[i];
      while (w) {
        const int v = static_cast<int>(i * 64 + std::countr_zero(w));
        vol += degree(v);
        inside += deg_into(v, s);
        w &= w - 1;
      }
    }
    return vol - inside;  // inside counts each internal edge twice
  }

  // |E(s, t)| for disjoint s, t.
  std::uint64_t cut_count(const VertexSet& s, const VertexSet& t) const {
    if (s.intersects(t)) throw std::invalid_argument("cut_count: sets not disjoint");
    std::uint64_t c = 0;
    const VertexSet& small = s.size() <= t.size() ? s : t;
    const VertexSet& big = s.size() <= t.size() ? t : s;
    for (int v : small.members()) c += deg_into(v, big);
    return c;
  }

  bool is_connected() const {
    if (n_ == 0) return true;
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int u : adj_[v])
        if (!seen[u]) {
          seen[u] = 1;
          ++reached;
          q.push(u);
        }
    }
    return reached == n_;
  }

  struct Induced;
  Induced induced_subgraph(const VertexSet& s) const;

 private:
  void build_bitmap() {
    if (n_ == 0 || n_ > kBitmapLimit) return;
    words_ = static_cast<std::size_t>((n_ + 63) / 64);
    bitmap_.assign(static_cast<std::size_t>(n_) * words_, 0);
    for (int u = 0; u < n_; ++u)
      for (int v : adj_[u])
        bitmap_[static_cast<std::size_t>(u) * words_ + (v >> 6)] |= 1ULL << (v & 63);
  }

  int n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<std::uint64_t> bitmap_;
  std::size_t words_ = 0;
};

struct Graph::Induced {
  Graph graph;
  std::vector<int> to_original;  // new id -> original id, ascending
};

inline Graph::Induced Graph::induced_subgraph(const VertexSet& s) const {
  if (s.universe() != n_) throw std::invalid_argument("induced_subgraph: universe mismatch");
  Induced out;
  out.to_original = s.members();
  std::vector<int> to_new(n_, -1);
  for (std::size_t i = 0; i < out.to_original.size(); ++i)
    to_new[out.to_original[i]] = static_cast<int>(i);
  std::vector<std::pair<int, int>> es;
  for (int u : out.to_original)
    for (int v : adj_[u])
      if (u < v && to_new[v] >= 0) es.emplace_back(to_new[u], to_new[v]);
  out.graph = Graph::from_edges(static_cast<int>(out.to_original.size()), es);
  return out;
}

}  // namespace ustlab
