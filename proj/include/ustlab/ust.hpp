#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ustlab/graph.hpp"
#include "ustlab/network.hpp"
#include "ustlab/rng.hpp"
#include "ustlab/tree.hpp"
#include "ustlab/walk.hpp"

namespace ustlab {

using bigint = boost::multiprecision::cpp_int;

// Distinct-vertex path; consecutive vertices are adjacent in the host graph.
struct LoopErasedPath {
  std::vector<int> vertices;

  int length() const { return static_cast<int>(vertices.size()) - 1; }
};

// Chronological loop erasure: scanning the trace, a revisit truncates the
// current path back to the earlier occurrence. Equivalent to the last-visit
// definition LE(X)_i = X_{s_i + 1}, s_i = max{t : X_t = LE(X)_{i-1}}.
inline LoopErasedPath loop_erase(std::span<const int> trace) {
  if (trace.empty()) throw std::invalid_argument("loop_erase: empty trace");
  int maxv = 0;
  for (int x : trace) {
    if (x < 0) throw std::invalid_argument("loop_erase: negative vertex");
    maxv = std::max(maxv, x);
  }
  std::vector<int> pos(maxv + 1, -1);
  LoopErasedPath out;
  for (int x : trace) {
    if (pos[x] >= 0) {
      while (static_cast<int>(out.vertices.size()) > pos[x] + 1) {
        pos[out.vertices.back()] = -1;
        out.vertices.pop_back();
      }
    } else {
      pos[x] = static_cast<int>(out.vertices.size());
      out.vertices.push_back(x);
    }
  }
  return out;
}

inline LoopErasedPath loop_erase(const WalkTrace& trace) { return loop_erase(std::span<const int>(trace.vertices)); }

inline int step_vertex(const Graph& g, int v, RngStream& rng) {
  const auto nb = g.neighbors(v);
  if (nb.empty()) throw std::runtime_error("step_vertex: isolated vertex");
  return nb[rng.below(nb.size())];
}

inline int step_vertex(const Network& net, int v, RngStream& rng) {
  return net.random_neighbor(v, rng);
}

namespace detail {

inline void validate_ordering(int n, std::span<const int> ordering) {
  if (static_cast<int>(ordering.size()) != n)
    throw std::invalid_argument("wilson: ordering must list every vertex");
  std::vector<char> seen(n, 0);
  for (int v : ordering) {
    if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("wilson: ordering is not a permutation");
    seen[v] = 1;
  }
}

}  // namespace detail

// Root first, then a seeded random shuffle of the rest.
inline std::vector<int> wilson_ordering(int n, int root, RngStream& rng) {
  if (root < 0 || root >= n) throw std::invalid_argument("wilson_ordering: root out of range");
  std::vector<int> order;
  order.reserve(n);
  order.push_back(root);
  for (int v = 0; v < n; ++v)
    if (v != root) order.push_back(v);
  for (std::size_t i = order.size() - 1; i >= 1; --i) {
    const std::size_t j = 1 + rng.below(i);  // keep root fixed at slot 0
    std::swap(order[i], order[j]);
  }
  return order;
}

// Wilson's algorithm by cycle popping: successive loop-erased walks from the
// ordering's vertices, each attached where it first hits the growing tree.
// ordering[0] is the root. Requires a connected host; a step budget converts
// runaway walks into an error instead of a hang.
template <class Net>
SpanningTree wilson(const Net& net, std::span<const int> ordering, RngStream& rng,
                    std::uint64_t step_cap = 0, std::uint64_t* steps_out = nullptr) {
  const int n = net.n();
  if (n == 0) throw std::invalid_argument("wilson: empty host");
  detail::validate_ordering(n, ordering);
  SpanningTree t;
  t.root = ordering[0];
  t.parent.assign(n, -1);
  std::vector<char> in_tree(n, 0);
  in_tree[t.root] = 1;
  std::vector<int> next(n, -1);
  std::uint64_t steps = 0;
  for (int i = 1; i < n; ++i) {
    const int start = ordering[i];
    if (in_tree[start]) continue;
    int u = start;
    while (!in_tree[u]) {
      next[u] = step_vertex(net, u, rng);
      ++steps;
      if (step_cap && steps > step_cap) throw std::runtime_error("wilson: step budget exceeded");
      u = next[u];
    }
    u = start;
    while (!in_tree[u]) {
      in_tree[u] = 1;
      t.parent[u] = next[u];
      u = next[u];
    }
  }
  if (steps_out) *steps_out = steps;
  return t;
}

template <class Net>
SpanningTree wilson(const Net& net, int root, RngStream& rng, std::uint64_t step_cap = 0) {
  const auto order = wilson_ordering(net.n(), root, rng);
  return wilson(net, std::span<const int>(order), rng, step_cap);
}

struct LerwRecord {
  int start = -1;
  std::uint64_t raw_steps = 0;    // raw walk length until the tree was hit
  std::vector<int> path;          // the loop-erased branch actually attached
};

struct WilsonRhoResult {
  SpanningTree tree;
  std::vector<LerwRecord> records;
  std::uint64_t total_steps = 0;
};

// Wilson on an augmented network rooted at rho (vertex n-1), with the given
// vertices walked first and their loop-erased branches recorded.
inline WilsonRhoResult wilson_rooted_at_rho(const Network& net_rho, std::span<const int> first_vertices,
                                            RngStream& rng, std::uint64_t step_cap = 0) {
  const int n = net_rho.n();
  if (n < 1) throw std::invalid_argument("wilson_rooted_at_rho: empty network");
  const int rho = n - 1;
  std::vector<char> listed(n, 0);
  listed[rho] = 1;
  std::vector<int> order{rho};
  for (int v : first_vertices) {
    if (v < 0 || v >= n || listed[v])
      throw std::invalid_argument("wilson_rooted_at_rho: bad first_vertices");
    listed[v] = 1;
    order.push_back(v);
  }
  std::vector<int> rest;
  for (int v = 0; v < n; ++v)
    if (!listed[v]) rest.push_back(v);
  for (std::size_t i = rest.size(); i > 1; --i) std::swap(rest[i - 1], rest[rng.below(i)]);
  order.insert(order.end(), rest.begin(), rest.end());

  WilsonRhoResult out;
  out.tree.root = rho;
  out.tree.parent.assign(n, -1);
  std::vector<char> in_tree(n, 0);
  in_tree[rho] = 1;
  std::vector<int> next(n, -1);
  for (int i = 1; i < n; ++i) {
    const int start = order[i];
    const bool record = i <= static_cast<int>(first_vertices.size());
    if (in_tree[start]) {
      if (record) out.records.push_back({start, 0, {start}});
      continue;
    }
    std::uint64_t raw = 0;
    int u = start;
    while (!in_tree[u]) {
      next[u] = net_rho.random_neighbor(u, rng);
      ++raw;
      ++out.total_steps;
      if (step_cap && out.total_steps > step_cap)
        throw std::runtime_error("wilson_rooted_at_rho: step budget exceeded");
      u = next[u];
    }
    LerwRecord rec;
    rec.start = start;
    rec.raw_steps = raw;
    u = start;
    while (!in_tree[u]) {
      rec.path.push_back(u);
      in_tree[u] = 1;
      out.tree.parent[u] = next[u];
      u = next[u];
    }
    rec.path.push_back(u);
    if (record) out.records.push_back(std::move(rec));
  }
  return out;
}

// Lift a tree sampled on a contracted network back to original-graph edges;
// each contracted edge picks a preimage edge proportionally to weight.
inline std::vector<std::pair<int, int>> lift_tree_edges(const Network& source, const ContractionMap& cm,
                                                        const SpanningTree& t, RngStream& rng) {
  std::vector<std::pair<int, int>> out;
  out.reserve(t.n() - 1);
  for (auto [a, b] : t.edges()) out.push_back(cm.lift_edge(source, a, b, rng));
  return out;
}

namespace detail {

inline bigint bareiss_determinant(std::vector<std::vector<bigint>> a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return 1;
  bigint prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;  // division is exact
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

}  // namespace detail

// Exact spanning tree count (Kirchhoff): determinant of the reduced Laplacian
// in exact integer arithmetic. Counts overflow 64 bits long before n = 64.
inline bigint spanning_tree_count(const Graph& g) {
  const int n = g.n();
  if (n > 64) throw std::invalid_argument("spanning_tree_count: size guard exceeded (n <= 64)");
  if (n == 0) throw std::invalid_argument("spanning_tree_count: empty graph");
  if (n == 1) return 1;
  std::vector<std::vector<bigint>> a(n - 1, std::vector<bigint>(n - 1, 0));
  for (int u = 1; u < n; ++u) {
    a[u - 1][u - 1] = g.degree(u);
    for (int v : g.neighbors(u))
      if (v >= 1) a[u - 1][v - 1] -= 1;
  }
  return detail::bareiss_determinant(std::move(a));
}

// log of the weighted spanning tree total (self-loops never enter trees).
// Returns -inf for disconnected networks.
inline double spanning_tree_log_total(const Network& net) {
  const int n = net.n();
  if (n > 64) throw std::invalid_argument("spanning_tree_log_total: size guard exceeded (n <= 64)");
  if (n == 0) throw std::invalid_argument("spanning_tree_log_total: empty network");
  if (n == 1) return 0.0;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (int u = 1; u < n; ++u) {
    double off = 0.0;
    for (const Network::Arc& a : net.arcs(u)) {
      if (a.to == u) continue;
      off += a.w;
      if (a.to >= 1) l(u - 1, a.to - 1) -= a.w;
    }
    l(u - 1, u - 1) = off;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(l);
  if (!lu.isInvertible()) return -std::numeric_limits<double>::infinity();
  double log_det = 0.0;
  for (int i = 0; i < n - 1; ++i) log_det += std::log(std::abs(lu.matrixLU()(i, i)));
  return log_det;
}

struct DominationEdgeStat {
  int u = 0, v = 0;
  double freq_sub = 0.0;   // Pr(e in UST(G)) estimate, G the subgraph
  double freq_host = 0.0;  // Pr(e in UST(H)) estimate, H the host
  double stderr_diff = 0.0;
};

struct DominationReport {
  std::vector<DominationEdgeStat> edges;
  std::vector<int> violations;  // indices where host freq exceeds sub freq beyond 4 stderr
  long long samples = 0;
  std::uint64_t seed = 0;
};

// Edge-marginal comparison for a spanning subgraph g of host h: UST edge
// probabilities in the host never exceed those in the subgraph.
inline DominationReport domination_probe(const Graph& g, const Graph& h, long long samples, RngStream& rng) {
  if (g.n() != h.n()) throw std::invalid_argument("domination_probe: vertex sets differ");
  for (auto [u, v] : g.edges())
    if (!h.has_edge(u, v)) throw std::invalid_argument("domination_probe: g is not a subgraph of h");
  if (samples <= 0) throw std::invalid_argument("domination_probe: samples must be positive");
  if (!g.is_connected() || !h.is_connected())
    throw std::invalid_argument("domination_probe: both graphs must be connected");

  const auto g_edges = g.edges();
  std::unordered_map<long long, int> index;
  index.reserve(g_edges.size());
  const auto key = [n = g.n()](int u, int v) {
    if (u > v) std::swap(u, v);
    return static_cast<long long>(u) * n + v;
  };
  for (std::size_t i = 0; i < g_edges.size(); ++i)
    index[key(g_edges[i].first, g_edges[i].second)] = static_cast<int>(i);

  std::vector<long long> cnt_sub(g_edges.size(), 0), cnt_host(g_edges.size(), 0);
  DominationReport rep;
  rep.samples = samples;
  rep.seed = rng.seed();
  for (long long s = 0; s < samples; ++s) {
    for (auto [u, v] : wilson(g, 0, rng).edges()) {
      auto it = index.find(key(u, v));
      if (it != index.end()) ++cnt_sub[it->second];
    }
    for (auto [u, v] : wilson(h, 0, rng).edges()) {
      auto it = index.find(key(u, v));
      if (it != index.end()) ++cnt_host[it->second];
    }
  }
  for (std::size_t i = 0; i < g_edges.size(); ++i) {
    DominationEdgeStat st;
    st.u = g_edges[i].first;
    st.v = g_edges[i].second;
    st.freq_sub = static_cast<double>(cnt_sub[i]) / samples;
    st.freq_host = static_cast<double>(cnt_host[i]) / samples;
    st.stderr_diff = std::sqrt(st.freq_sub * (1 - st.freq_sub) / samples +
                               st.freq_host * (1 - st.freq_host) / samples);
    if (st.freq_host - st.freq_sub > 4.0 * st.stderr_diff)
      rep.violations.push_back(static_cast<int>(i));
    rep.edges.push_back(st);
  }
  return rep;
}

}  // namespace ustlab
