#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ustlab/graph.hpp"
#include "ustlab/vertex_set.hpp"

namespace ustlab {

// Partition of [0, n) into k nonempty blocks labeled 0..k-1.
struct Partition {
  int n = 0;
  int k = 0;
  std::vector<int> block_of;

  static Partition from_block_of(std::vector<int> assignment) {
    Partition p;
    p.n = static_cast<int>(assignment.size());
    p.block_of = std::move(assignment);
    int maxb = -1;
    for (int b : p.block_of) {
      if (b < 0) throw std::invalid_argument("Partition: negative block id");
      maxb = std::max(maxb, b);
    }
    p.k = maxb + 1;
    std::vector<int> sizes(p.k, 0);
    for (int b : p.block_of) ++sizes[b];
    for (int s : sizes)
      if (s == 0) throw std::invalid_argument("Partition: empty block id");
    return p;
  }

  static Partition from_blocks(int n, const std::vector<VertexSet>& blocks) {
    std::vector<int> assignment(n, -1);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (blocks[i].universe() != n) throw std::invalid_argument("Partition: universe mismatch");
      for (int v : blocks[i].members()) {
        if (assignment[v] != -1) throw std::invalid_argument("Partition: blocks overlap");
        assignment[v] = static_cast<int>(i);
      }
    }
    for (int a : assignment)
      if (a == -1) throw std::invalid_argument("Partition: blocks do not cover");
    return from_block_of(std::move(assignment));
  }

  static Partition trivial(int n) { return from_block_of(std::vector<int>(n, 0)); }

  VertexSet block(int i) const {
    VertexSet s(n);
    for (int v = 0; v < n; ++v)
      if (block_of[v] == i) s.add(v);
    return s;
  }

  std::vector<VertexSet> blocks() const {
    std::vector<VertexSet> out(k, VertexSet(n));
    for (int v = 0; v < n; ++v) out[block_of[v]].add(v);
    return out;
  }

  std::vector<int> block_sizes() const {
    std::vector<int> sizes(k, 0);
    for (int b : block_of) ++sizes[b];
    return sizes;
  }
};

// cut[i][j] = |E(V_i, V_j)| for i != j; diagonal holds internal edge counts.
inline std::vector<std::vector<std::uint64_t>> block_cut_matrix(const Graph& g, const Partition& p) {
  if (p.n != g.n()) throw std::invalid_argument("block_cut_matrix: size mismatch");
  std::vector<std::vector<std::uint64_t>> cut(p.k, std::vector<std::uint64_t>(p.k, 0));
  for (int u = 0; u < g.n(); ++u)
    for (int v : g.neighbors(u)) {
      if (u > v) continue;
      const int bu = p.block_of[u], bv = p.block_of[v];
      ++cut[bu][bv];
      if (bu != bv) ++cut[bv][bu];
    }
  return cut;
}

// Auxiliary graph on blocks: i ~ j iff |E(V_i, V_j)| > c.
inline Graph h_graph(const Graph& g, const Partition& p, double c) {
  const auto cut = block_cut_matrix(g, p);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < p.k; ++i)
    for (int j = i + 1; j < p.k; ++j)
      if (static_cast<double>(cut[i][j]) > c) edges.emplace_back(i, j);
  return Graph::from_edges(p.k, edges);
}

}  // namespace ustlab
