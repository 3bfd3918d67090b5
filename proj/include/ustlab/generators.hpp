#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ustlab/graph.hpp"
#include "ustlab/io.hpp"
#include "ustlab/rng.hpp"

namespace ustlab {

inline Graph complete_graph(int n) {
  if (n < 1) throw std::invalid_argument("complete_graph: n >= 1");
  std::vector<std::pair<int, int>> es;
  es.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) es.emplace_back(u, v);
  return Graph::from_edges(n, es);
}

inline Graph star_graph(int n) {
  if (n < 2) throw std::invalid_argument("star_graph: n >= 2");
  std::vector<std::pair<int, int>> es;
  for (int v = 1; v < n; ++v) es.emplace_back(0, v);
  return Graph::from_edges(n, es);
}

inline Graph path_graph(int n) {
  if (n < 1) throw std::invalid_argument("path_graph: n >= 1");
  std::vector<std::pair<int, int>> es;
  for (int v = 0; v + 1 < n; ++v) es.emplace_back(v, v + 1);
  return Graph::from_edges(n, es);
}

// Cliques on {0..a-1} and {a..n-1} (a = floor(n/2)) joined by the single
// edge (a-1, a).
inline Graph two_cliques_bridge(int n) {
  if (n < 2) throw std::invalid_argument("two_cliques_bridge: n >= 2");
  const int a = n / 2;
  std::vector<std::pair<int, int>> es;
  for (int u = 0; u < a; ++u)
    for (int v = u + 1; v < a; ++v) es.emplace_back(u, v);
  for (int u = a; u < n; ++u)
    for (int v = u + 1; v < n; ++v) es.emplace_back(u, v);
  es.emplace_back(a - 1, a);
  return Graph::from_edges(n, es);
}

inline Graph complete_bipartite(int a, int b) {
  if (a < 1 || b < 1) throw std::invalid_argument("complete_bipartite: both sides nonempty");
  std::vector<std::pair<int, int>> es;
  es.reserve(static_cast<std::size_t>(a) * b);
  for (int u = 0; u < a; ++u)
    for (int v = a; v < a + b; ++v) es.emplace_back(u, v);
  return Graph::from_edges(a + b, es);
}

inline Graph dense_gnp(int n, double p, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("dense_gnp: n >= 1");
  if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("dense_gnp: p in [0,1]");
  std::vector<std::pair<int, int>> es;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) es.emplace_back(u, v);
  return Graph::from_edges(n, es);
}

struct FamilySpec {
  std::string family = "complete";  // complete | two-cliques-bridge | dense-gnp |
                                    // complete-bipartite | star | file
  int n = 0;
  double p = 0.9;   // dense-gnp edge probability
  int a = 0, b = 0; // complete-bipartite sides; 0,0 means split n in half
  std::string path; // file source
};

inline bool family_is_random(const std::string& family) { return family == "dense-gnp"; }

inline Graph make_family(const FamilySpec& spec, RngStream* rng = nullptr) {
  if (spec.family == "complete") return complete_graph(spec.n);
  if (spec.family == "two-cliques-bridge") return two_cliques_bridge(spec.n);
  if (spec.family == "star") return star_graph(spec.n);
  if (spec.family == "complete-bipartite") {
    if (spec.a > 0 && spec.b > 0) return complete_bipartite(spec.a, spec.b);
    return complete_bipartite(spec.n / 2, spec.n - spec.n / 2);
  }
  if (spec.family == "dense-gnp") {
    if (!rng) throw std::invalid_argument("make_family: dense-gnp needs a seeded rng");
    return dense_gnp(spec.n, spec.p, *rng);
  }
  if (spec.family == "file") return load_graph_file(spec.path);
  throw std::invalid_argument("make_family: unknown family '" + spec.family + "'");
}

// Generate until connected with min degree >= min_degree_frac * n; random
// families get a retry budget, deterministic ones a single shot.
inline Graph gen_constrained(const FamilySpec& spec, double min_degree_frac,
                             RngStream* rng = nullptr, int retries = 64) {
  const int attempts = family_is_random(spec.family) ? std::max(1, retries) : 1;
  for (int i = 0; i < attempts; ++i) {
    Graph g = make_family(spec, rng);
    if (!g.is_connected()) continue;
    if (static_cast<double>(g.min_degree()) < min_degree_frac * g.n() - 1e-9) continue;
    return g;
  }
  throw std::runtime_error("gen_constrained: constraint unsatisfied after retry budget (family " +
                           spec.family + ")");
}

}  // namespace ustlab
