#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "ustlab/graph.hpp"
#include "ustlab/rng.hpp"

namespace ustlab {

// Weighted undirected network. Weights are strictly positive; self-loops are
// allowed and count once toward the vertex strength, so the transition
// probability of edge (v,u) is w(v,u)/strength(v). Per-vertex prefix sums
// support O(log deg) weighted neighbor sampling.
class Network {
 public:
  struct Arc {
    int to;
    double w;
  };

  Network() = default;

  // edges: (u, v, w); u == v is a self-loop. Parallel entries are rejected.
  static Network from_weighted_edges(int n, const std::vector<std::tuple<int, int, double>>& edges) {
    if (n < 0) throw std::invalid_argument("Network: negative vertex count");
    Network net;
    net.n_ = n;
    net.adj_.assign(n, {});
    for (auto [u, v, w] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw std::invalid_argument("Network: endpoint out of range");
      if (!(w > 0.0)) throw std::invalid_argument("Network: weight must be positive");
      net.adj_[u].push_back({v, w});
      if (u != v) net.adj_[v].push_back({u, w});
    }
    net.finish();
    return net;
  }

  static Network from_graph(const Graph& g) {
    Network net;
    net.n_ = g.n();
    net.adj_.assign(net.n_, {});
    for (int u = 0; u < g.n(); ++u)
      for (int v : g.neighbors(u)) net.adj_[u].push_back({v, 1.0});
    net.finish();
    return net;
  }

  int n() const { return n_; }
  std::size_t edge_count() const { return m_; }
  const std::vector<Arc>& arcs(int v) const { return adj_[v]; }
  double strength(int v) const { return strength_[v]; }
  double total_strength() const { return total_strength_; }

  double weight(int u, int v) const {
    const auto& a = adj_[u];
    auto it = std::lower_bound(a.begin(), a.end(), v,
                               [](const Arc& x, int t) { return x.to < t; });
    return (it != a.end() && it->to == v) ? it->w : 0.0;
  }

  bool has_edge(int u, int v) const { return weight(u, v) > 0.0; }

  // Transition step of the simple (weighted) walk.
  int random_neighbor(int v, RngStream& rng) const {
    const auto& cum = cum_[v];
    if (cum.empty()) throw std::runtime_error("Network: step from isolated vertex");
    const double r = rng.uniform() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), r);
    std::size_t i = static_cast<std::size_t>(it - cum.begin());
    if (i >= cum.size()) i = cum.size() - 1;
    return adj_[v][i].to;
  }

  bool is_connected() const {
    if (n_ == 0) return true;
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const Arc& a : adj_[v])
        if (!seen[a.to]) {
          seen[a.to] = 1;
          ++reached;
          stack.push_back(a.to);
        }
    }
    return reached == n_;
  }

  // Undirected edge list with u <= v.
  std::vector<std::tuple<int, int, double>> weighted_edges() const {
    std::vector<std::tuple<int, int, double>> out;
    for (int u = 0; u < n_; ++u)
      for (const Arc& a : adj_[u])
        if (u <= a.to) out.emplace_back(u, a.to, a.w);
    return out;
  }

 private:
  void finish() {
    for (int v = 0; v < n_; ++v) {
      auto& a = adj_[v];
      std::sort(a.begin(), a.end(), [](const Arc& x, const Arc& y) { return x.to < y.to; });
      for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i].to == a[i - 1].to)
          throw std::invalid_argument("Network: parallel edges must be pre-merged");
    }
    strength_.assign(n_, 0.0);
    cum_.assign(n_, {});
    m_ = 0;
    total_strength_ = 0.0;
    for (int v = 0; v < n_; ++v) {
      double s = 0.0;
      cum_[v].reserve(adj_[v].size());
      for (const Arc& a : adj_[v]) {
        s += a.w;
        cum_[v].push_back(s);
        if (v <= a.to) ++m_;
      }
      strength_[v] = s;
      total_strength_ += s;
    }
  }

  int n_ = 0;
  std::size_t m_ = 0;
  double total_strength_ = 0.0;
  std::vector<std::vector<Arc>> adj_;
  std::vector<double> strength_;
  std::vector<std::vector<double>> cum_;
};

// Quotient of a network by a list of disjoint vertex blocks. Block j becomes
// vertex j; unlisted vertices follow in ascending original order. Intra-block
// edges (including self-loops inside a block) are dropped; parallel edges
// arising from the quotient are merged by summing weights.
struct ContractionMap {
  int source_n = 0;
  std::vector<int> block_of;  // original vertex -> contracted vertex
  Network contracted;

  // Original edges that map to contracted edge (a, b), with weights.
  std::vector<std::tuple<int, int, double>> preimage_edges(const Network& source, int a, int b) const {
    std::vector<std::tuple<int, int, double>> out;
    for (int u = 0; u < source_n; ++u) {
      if (block_of[u] != a) continue;
      for (const Network::Arc& arc : source.arcs(u)) {
        if (block_of[arc.to] != b) continue;
        if (a == b && u > arc.to) continue;
        out.emplace_back(u, arc.to, arc.w);
      }
    }
    return out;
  }

  // Sample an original edge mapping to contracted edge (a, b), proportionally
  // to weight. This realizes the parallel-edge correspondence of the quotient.
  std::pair<int, int> lift_edge(const Network& source, int a, int b, RngStream& rng) const {
    auto pre = preimage_edges(source, a, b);
    if (pre.empty()) throw std::invalid_argument("lift_edge: no preimage");
    double total = 0.0;
    for (auto& [u, v, w] : pre) total += w;
    double r = rng.uniform() * total;
    for (auto& [u, v, w] : pre) {
      r -= w;
      if (r <= 0.0) return {u, v};
    }
    auto& [u, v, w] = pre.back();
    return {u, v};
  }
};

inline ContractionMap contract(const Network& net, const std::vector<VertexSet>& blocks) {
  const int n = net.n();
  ContractionMap cm;
  cm.source_n = n;
  cm.block_of.assign(n, -1);
  const int k = static_cast<int>(blocks.size());
  for (int j = 0; j < k; ++j) {
    if (blocks[j].universe() != n) throw std::invalid_argument("contract: universe mismatch");
    if (blocks[j].empty()) throw std::invalid_argument("contract: empty block");
    for (int v : blocks[j].members()) {
      if (cm.block_of[v] != -1) throw std::invalid_argument("contract: blocks not disjoint");
      cm.block_of[v] = j;
    }
  }
  int next = k;
  for (int v = 0; v < n; ++v)
    if (cm.block_of[v] == -1) cm.block_of[v] = next++;

  std::map<std::pair<int, int>, double> merged;
  for (int u = 0; u < n; ++u) {
    for (const Network::Arc& a : net.arcs(u)) {
      if (u > a.to) continue;
      const int bu = cm.block_of[u], bv = cm.block_of[a.to];
      if (bu == bv) continue;  // intra-block edges vanish, no self-loop created
      merged[{std::min(bu, bv), std::max(bu, bv)}] += a.w;
    }
  }
  std::vector<std::tuple<int, int, double>> es;
  es.reserve(merged.size());
  for (auto& [key, w] : merged) es.emplace_back(key.first, key.second, w);
  cm.contracted = Network::from_weighted_edges(next, es);
  return cm;
}

inline ContractionMap contract(const Graph& g, const std::vector<VertexSet>& blocks) {
  return contract(Network::from_graph(g), blocks);
}

// Augment g with an extra vertex rho (id n) joined to every v by weight
// theta*eps^4*deg(v)/(sqrt(n)-theta*eps^4), so a walk at v moves to rho with
// probability exactly theta*eps^4/sqrt(n).
inline Network augment_rho(const Graph& g, double theta, double eps) {
  const int n = g.n();
  if (n == 0) throw std::invalid_argument("augment_rho: empty graph");
  const double a = theta * std::pow(eps, 4);
  const double root_n = std::sqrt(static_cast<double>(n));
  if (!(a > 0.0) || a >= root_n)
    throw std::invalid_argument("augment_rho: need 0 < theta*eps^4 < sqrt(n)");
  std::vector<std::tuple<int, int, double>> es;
  es.reserve(g.m() + n);
  for (auto [u, v] : g.edges()) es.emplace_back(u, v, 1.0);
  const double scale = a / (root_n - a);
  for (int v = 0; v < n; ++v) {
    if (g.degree(v) == 0) throw std::invalid_argument("augment_rho: isolated vertex");
    es.emplace_back(v, n, scale * g.degree(v));
  }
  return Network::from_weighted_edges(n + 1, es);
}

}  // namespace ustlab
