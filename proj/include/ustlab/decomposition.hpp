#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ustlab/graph.hpp"
#include "ustlab/partition.hpp"
#include "ustlab/spectral.hpp"

namespace ustlab {

struct ConditionRecord {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool is_upper_bound = false;  // pass means value <= threshold
  bool pass = false;
};

inline ConditionRecord check_lower(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, false, value >= threshold - 1e-8};
}

inline ConditionRecord check_upper(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, true, value <= threshold + 1e-8};
}

struct PrimaryAudit {
  std::vector<ConditionRecord> conditions;
  std::vector<double> block_gaps;
  std::vector<double> block_min_degrees;  // min over v in V_i of deg(v, V_i)
  bool all_pass = false;
};

// delta-primary conditions: block count, block sizes, in-block degrees,
// per-block spectral gaps.
inline PrimaryAudit verify_primary(const Graph& g, const Partition& part, double delta) {
  const double n = static_cast<double>(g.n());
  PrimaryAudit audit;
  const auto blocks = part.blocks();
  int min_size = g.n();
  double min_deg = n;
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < part.k; ++i) {
    min_size = std::min(min_size, blocks[i].size());
    const auto sub = g.induced_subgraph(blocks[i]);
    const double gap = sub.graph.n() > 1 ? spectrum(sub.graph).gap : 1.0;
    audit.block_gaps.push_back(gap);
    min_gap = std::min(min_gap, gap);
  }
  audit.block_min_degrees.assign(part.k, n);
  for (int v = 0; v < g.n(); ++v) {
    const int b = part.block_of[v];
    const double d = static_cast<double>(g.deg_into(v, blocks[b]));
    audit.block_min_degrees[b] = std::min(audit.block_min_degrees[b], d);
    min_deg = std::min(min_deg, d);
  }
  audit.conditions.push_back(check_upper("block_count", part.k, 2.0 / delta));
  audit.conditions.push_back(check_lower("min_block_size", min_size, delta * n / 2.0));
  audit.conditions.push_back(check_lower("min_in_block_degree", min_deg, std::pow(delta, 4) * n / 40.0));
  audit.conditions.push_back(check_lower("min_block_gap", min_gap, std::pow(delta, 10) / 4194304.0));
  audit.all_pass = true;
  for (const auto& c : audit.conditions) audit.all_pass = audit.all_pass && c.pass;
  return audit;
}

namespace detail {

struct SparseCut {
  bool found = false;
  VertexSet side;  // one side of the split, in original vertex ids
};

// Exhaustive bipartition scan for small blocks: first subset (in mask order)
// whose cut is at most thresh_coef * |W1| * |W2|.
inline SparseCut sparse_cut_exhaustive(const Graph& g, const std::vector<int>& members, double thresh_coef) {
  const int w = static_cast<int>(members.size());
  std::vector<std::uint32_t> adj(w, 0);  // local adjacency among members[1..]
  for (int a = 0; a < w; ++a)
    for (int b = 0; b < w; ++b)
      if (a != b && g.has_edge(members[a], members[b])) adj[a] |= 1u << b;
  for (std::uint32_t t = 1; t < (1u << (w - 1)); ++t) {
    const std::uint32_t side2 = t << 1;  // member 0 stays in side 1
    const int s2 = std::popcount(side2);
    const int s1 = w - s2;
    std::uint32_t rem = side2;
    long long cut = 0;
    while (rem) {
      const int a = std::countr_zero(rem);
      rem &= rem - 1;
      cut += std::popcount(adj[a] & ~side2);
    }
    if (static_cast<double>(cut) <= thresh_coef * s1 * s2) {
      SparseCut out;
      out.found = true;
      out.side = VertexSet(g.n());
      for (int a = 0; a < w; ++a)
        if (!((side2 >> a) & 1u)) out.side.add(members[a]);
      return out;
    }
  }
  return {};
}

// Spectral sweep plus greedy single-vertex moves, minimizing
// cut / (|W1| * |W2|); qualification is checked afterwards.
inline SparseCut sparse_cut_heuristic(const Graph& g, const VertexSet& block, double thresh_coef) {
  const auto sub = g.induced_subgraph(block);
  const Graph& gs = sub.graph;
  const int w = gs.n();

  std::vector<char> side(w, 0);  // 1 = second side
  if (!gs.is_connected()) {
    // any connected component comes off with an empty cut, which always qualifies
    std::vector<int> stack{0};
    std::vector<char> seen(w, 0);
    seen[0] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : gs.neighbors(v))
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
    }
    for (int v = 0; v < w; ++v) side[v] = seen[v] ? 0 : 1;
  } else {
    const EigenPairs ep = eigenpairs(Network::from_graph(gs));
    std::vector<int> order(w);
    for (int v = 0; v < w; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double fa = ep.right_vectors(a, 1), fb = ep.right_vectors(b, 1);
      return fa != fb ? fa < fb : a < b;
    });
    VertexSet prefix(w);
    long long cut = 0;
    double best_ratio = std::numeric_limits<double>::infinity();
    int best_p = 1;
    for (int p = 0; p < w - 1; ++p) {
      const int v = order[p];
      cut += gs.degree(v) - 2LL * gs.deg_into(v, prefix);
      prefix.add(v);
      const double ratio = static_cast<double>(cut) /
                           (static_cast<double>(p + 1) * (w - p - 1));
      if (ratio < best_ratio) {
        best_ratio = ratio;
        best_p = p + 1;
      }
    }
    for (int p = 0; p < best_p; ++p) side[order[p]] = 1;
    // greedy local moves
    long long cur_cut = 0;
    long long s2 = 0;
    for (int v = 0; v < w; ++v) {
      if (side[v]) ++s2;
      for (int u : gs.neighbors(v))
        if (v < u && side[v] != side[u]) ++cur_cut;
    }
    for (int pass = 0; pass < 100; ++pass) {
      double cur_ratio = static_cast<double>(cur_cut) / (static_cast<double>(w - s2) * s2);
      int best_v = -1;
      long long best_cut = 0;
      double best_move = cur_ratio;
      for (int v = 0; v < w; ++v) {
        const long long same = [&] {
          long long c = 0;
          for (int u : gs.neighbors(v)) c += (side[u] == side[v]);
          return c;
        }();
        const long long cross = gs.degree(v) - same;
        const long long new_cut = cur_cut + same - cross;
        const long long new_s2 = s2 + (side[v] ? -1 : 1);
        if (new_s2 <= 0 || new_s2 >= w) continue;
        const double r = static_cast<double>(new_cut) / (static_cast<double>(w - new_s2) * new_s2);
        if (r < best_move - 1e-15) {
          best_move = r;
          best_v = v;
          best_cut = new_cut;
        }
      }
      if (best_v < 0) break;
      s2 += side[best_v] ? -1 : 1;
      side[best_v] = !side[best_v];
      cur_cut = best_cut;
    }
  }

  long long s2 = 0, cut = 0;
  for (int v = 0; v < w; ++v) {
    if (side[v]) ++s2;
    for (int u : gs.neighbors(v))
      if (v < u && side[v] != side[u]) ++cut;
  }
  if (s2 == 0 || s2 == w) return {};
  if (static_cast<double>(cut) > thresh_coef * static_cast<double>(w - s2) * s2) return {};
  SparseCut out;
  out.found = true;
  out.side = VertexSet(g.n());
  for (int v = 0; v < w; ++v)
    if (!side[v]) out.side.add(sub.to_original[v]);
  return out;
}

inline SparseCut find_sparse_cut(const Graph& g, const VertexSet& block, double thresh_coef) {
  if (block.size() < 2) return {};
  if (block.size() <= 22) return sparse_cut_exhaustive(g, block.members(), thresh_coef);
  return sparse_cut_heuristic(g, block, thresh_coef);
}

}  // namespace detail

struct PrimaryResult {
  Partition partition;
  PrimaryAudit audit;
  std::uint64_t negligible_edges = 0;
  std::vector<int> bad_vertices;
  std::vector<int> evil_vertices;
  bool redistribution_fallback = false;
};

// delta-primary decomposition: refine while a sparse bipartition exists
// (cut <= (delta^3/20)|W1||W2|), classify vertices by negligible degree,
// drop all-bad sets, and reattach their vertices to well-connected blocks.
inline PrimaryResult primary_decomposition(const Graph& g, double delta, bool strict = true) {
  const int n = g.n();
  if (n == 0) throw std::invalid_argument("primary_decomposition: empty graph");
  if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("primary_decomposition: delta in (0,1]");
  if (g.min_degree() < delta * n - 1e-9)
    throw std::invalid_argument("primary_decomposition: min degree below delta*n");

  const double coef = std::pow(delta, 3) / 20.0;
  std::vector<std::uint64_t> negligible_deg(n, 0);
  std::uint64_t negligible_total = 0;
  std::vector<VertexSet> final_sets;

  // DFS refinement; the recursion depth is at most n
  std::vector<VertexSet> work{VertexSet::full(n)};
  while (!work.empty()) {
    VertexSet blk = std::move(work.back());
    work.pop_back();
    const detail::SparseCut cut = detail::find_sparse_cut(g, blk, coef);
    if (!cut.found) {
      final_sets.push_back(std::move(blk));
      continue;
    }
    VertexSet w1(n), w2(n);
    for (int v : blk.members()) (cut.side.contains(v) ? w1 : w2).add(v);
    for (int v : w1.members()) {
      const std::uint64_t c = g.deg_into(v, w2);
      negligible_deg[v] += c;
      negligible_total += c;
    }
    for (int v : w2.members()) negligible_deg[v] += g.deg_into(v, w1);
    // process the side holding the smallest id first
    work.push_back(std::move(w2));
    work.push_back(std::move(w1));
  }
  std::sort(final_sets.begin(), final_sets.end(), [](const VertexSet& a, const VertexSet& b) {
    return a.members().front() < b.members().front();
  });

  PrimaryResult res;
  res.negligible_edges = negligible_total;
  std::vector<char> bad(n, 0);
  for (int v = 0; v < n; ++v)
    if (static_cast<double>(negligible_deg[v]) > delta * n / 2.0) {
      bad[v] = 1;
      res.bad_vertices.push_back(v);
    }

  std::vector<VertexSet> good_sets;
  for (const VertexSet& s : final_sets) {
    bool has_good = false;
    for (int v : s.members())
      if (!bad[v]) {
        has_good = true;
        break;
      }
    if (has_good) good_sets.push_back(s);
    else
      for (int v : s.members()) res.evil_vertices.push_back(v);
  }
  if (good_sets.empty()) throw std::runtime_error("primary_decomposition: refinement left no good sets");

  const std::vector<VertexSet> targets = good_sets;  // degrees judged against pre-reattach sets
  std::sort(res.evil_vertices.begin(), res.evil_vertices.end());
  for (int v : res.evil_vertices) {
    int chosen = -1;
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (static_cast<double>(g.deg_into(v, targets[i])) >= delta * delta * n / 3.0 - 1e-9) {
        chosen = static_cast<int>(i);
        break;
      }
    if (chosen < 0) {
      res.redistribution_fallback = true;
      std::uint64_t best = 0;
      chosen = 0;
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const std::uint64_t d = g.deg_into(v, targets[i]);
        if (d > best) {
          best = d;
          chosen = static_cast<int>(i);
        }
      }
    }
    good_sets[chosen].add(v);
  }

  res.partition = Partition::from_blocks(n, good_sets);
  res.audit = verify_primary(g, res.partition, delta);
  if (strict && !res.audit.all_pass)
    throw std::runtime_error("primary_decomposition: audit failed (refinement could not certify)");
  return res;
}

struct CoarseningResult {
  Partition partition;                  // over vertices
  double theta = 0.0;
  int merges = 0;
  std::vector<std::vector<int>> groups; // coarse block -> constituent fine blocks
};

// Merge loop: while some coarse block has external boundary > theta^2*alpha*beta,
// square theta (times alpha/l^2) and merge along the heaviest fine-block pair
// crossing that boundary. Halts after at most l-1 merges.
inline CoarseningResult coarsen(const Graph& g, const Partition& p_prime, double eps, double alpha, double beta) {
  if (p_prime.n != g.n()) throw std::invalid_argument("coarsen: size mismatch");
  if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("coarsen: eps in (0,1]");
  if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("coarsen: alpha in (0,1]");
  if (!(beta > 0.0)) throw std::invalid_argument("coarsen: beta must be positive");
  const int l = p_prime.k;
  const auto cut = block_cut_matrix(g, p_prime);
  const double l2 = static_cast<double>(l) * l;

  CoarseningResult res;
  res.theta = eps;
  std::vector<std::vector<int>> groups(l);
  for (int i = 0; i < l; ++i) groups[i] = {i};
  std::vector<int> group_of(l);
  for (int i = 0; i < l; ++i) group_of[i] = i;

  auto boundary = [&](const std::vector<int>& grp) {
    std::uint64_t b = 0;
    for (int i : grp)
      for (int j = 0; j < l; ++j)
        if (group_of[j] != group_of[i]) b += cut[i][j];
    return b;
  };

  while (true) {
    const double limit = res.theta * res.theta * alpha * beta;
    int offender = -1;
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
      if (static_cast<double>(boundary(groups[gi])) > limit) {
        offender = static_cast<int>(gi);
        break;
      }
    if (offender < 0) break;
    // heaviest crossing pair (fine block inside, fine block outside)
    std::uint64_t best = 0;
    int bw1 = -1, bw2 = -1;
    for (int i : groups[offender])
      for (int j = 0; j < l; ++j) {
        if (group_of[j] == offender) continue;
        if (cut[i][j] > best) {
          best = cut[i][j];
          bw1 = i;
          bw2 = j;
        }
      }
    if (bw2 < 0) throw std::runtime_error("coarsen: offender block has no external edges");
    (void)bw1;
    res.theta = (alpha / l2) * res.theta * res.theta;
    ++res.merges;
    if (res.merges > l) throw std::runtime_error("coarsen: merge budget exceeded");
    const int other = group_of[bw2];
    const int keep = std::min(offender, other);
    const int drop = std::max(offender, other);
    groups[keep].insert(groups[keep].end(), groups[drop].begin(), groups[drop].end());
    groups.erase(groups.begin() + drop);
    for (int i = 0; i < l; ++i)
      group_of[i] = -1;
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
      for (int i : groups[gi]) group_of[i] = static_cast<int>(gi);
  }

  std::vector<int> assignment(g.n());
  for (int v = 0; v < g.n(); ++v) assignment[v] = group_of[p_prime.block_of[v]];
  res.partition = Partition::from_block_of(std::move(assignment));
  res.groups = std::move(groups);
  return res;
}

struct CoarseningAudit {
  std::vector<ConditionRecord> conditions;
  bool all_pass = false;
};

// Def-style audit of a coarsening: every coarse block's fine sub-blocks are
// glued by crossings above theta*beta, boundaries are small, theta is within
// its certified range.
inline CoarseningAudit verify_coarsening(const Graph& g, const Partition& p_prime,
                                         const CoarseningResult& res, double eps, double alpha,
                                         double beta) {
  CoarseningAudit audit;
  const int l = p_prime.k;
  const auto cut = block_cut_matrix(g, p_prime);
  bool glued = true;
  for (const auto& grp : res.groups) {
    const int k = static_cast<int>(grp.size());
    if (k <= 1) continue;
    // connectivity of the crossing graph above theta*beta inside the group
    std::vector<char> seen(k, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < k; ++b)
        if (!seen[b] && static_cast<double>(cut[grp[a]][grp[b]]) > res.theta * beta) {
          seen[b] = 1;
          ++reached;
          stack.push_back(b);
        }
    }
    glued = glued && (reached == k);
  }
  audit.conditions.push_back({"h_graphs_connected", glued ? 1.0 : 0.0, 1.0, false, glued});

  double max_boundary = 0.0;
  const auto blocks = res.partition.blocks();
  for (const VertexSet& blk : blocks)
    max_boundary = std::max(max_boundary, static_cast<double>(g.edge_boundary(blk)));
  audit.conditions.push_back(
      check_upper("max_block_boundary", max_boundary, res.theta * res.theta * alpha * beta));
  const double l2 = static_cast<double>(l) * l;
  audit.conditions.push_back(check_lower(
      "theta_lower", res.theta, eps * std::pow(eps * alpha / l2, std::pow(2.0, l))));
  audit.conditions.push_back(check_upper("theta_upper", res.theta, eps));
  audit.all_pass = true;
  for (const auto& c : audit.conditions) audit.all_pass = audit.all_pass && c.pass;
  return audit;
}

struct GoodAudit {
  std::vector<ConditionRecord> conditions;
  std::vector<double> block_gaps;
  bool all_pass = false;
};

inline GoodAudit verify_good(const Graph& g, const Partition& part, double theta, double eps,
                             double delta, double beta) {
  GoodAudit audit;
  const double n = static_cast<double>(g.n());
  const auto blocks = part.blocks();
  int min_size = g.n();
  double min_gap = std::numeric_limits<double>::infinity();
  double min_deg = n;
  double max_boundary = 0.0;
  for (int i = 0; i < part.k; ++i) {
    min_size = std::min(min_size, blocks[i].size());
    const auto sub = g.induced_subgraph(blocks[i]);
    const double gap = sub.graph.n() > 1 ? spectrum(sub.graph).gap : 1.0;
    audit.block_gaps.push_back(gap);
    min_gap = std::min(min_gap, gap);
    max_boundary = std::max(max_boundary, static_cast<double>(g.edge_boundary(blocks[i])));
  }
  for (int v = 0; v < g.n(); ++v)
    min_deg = std::min(min_deg, static_cast<double>(g.deg_into(v, blocks[part.block_of[v]])));

  audit.conditions.push_back(check_upper("block_count", part.k, 2.0 / delta));
  audit.conditions.push_back(check_lower("min_block_size", min_size, delta * n / 2.0));
  audit.conditions.push_back(check_lower(
      "min_block_gap", min_gap, std::pow(delta, 15) * theta * beta / (2147483648.0 * n * n)));
  audit.conditions.push_back(check_lower("min_in_block_degree", min_deg, std::pow(delta, 4) * n / 40.0));
  audit.conditions.push_back(check_upper("max_block_boundary", max_boundary,
                                         std::pow(eps, 9) * theta * theta * beta));
  audit.conditions.push_back(
      check_lower("theta_lower", theta, std::pow(eps, 11.0 * std::pow(2.0, 2.0 / delta))));
  audit.conditions.push_back(check_upper("theta_upper", theta, eps));
  audit.all_pass = true;
  for (const auto& c : audit.conditions) audit.all_pass = audit.all_pass && c.pass;
  return audit;
}

struct GoodDecomposition;
inline GoodAudit verify_good(const Graph& g, const GoodDecomposition& gd);

struct GoodDecomposition {
  Partition partition;
  double theta = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  double beta = 0.0;
  GoodAudit audit;
  std::uint64_t negligible_edges = 0;
  int evil_count = 0;
  int coarsen_merges = 0;
  bool eps_warning = false;  // guarantees are vacuous above eps = 0.3
};

// Full pipeline: delta-primary refinement, then an (eps, eps^9, beta)-good
// coarsening of it. beta <= 0 selects the default n^1.5.
inline GoodDecomposition good_decomposition(const Graph& g, double eps, double delta,
                                            double beta = -1.0, bool strict = true) {
  const double n = static_cast<double>(g.n());
  if (g.n() == 0) throw std::invalid_argument("good_decomposition: empty graph");
  if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("good_decomposition: eps in (0,1]");
  if (beta <= 0.0) beta = std::pow(n, 1.5);
  const double beta_limit = 240.0 * n * n / (eps * std::pow(delta, 4));
  if (beta >= beta_limit)
    throw std::invalid_argument("good_decomposition: beta must be below 240 n^2 / (eps delta^4)");

  const PrimaryResult primary = primary_decomposition(g, delta, strict);
  const double alpha = std::pow(eps, 9);
  const CoarseningResult coarse = coarsen(g, primary.partition, eps, alpha, beta);

  GoodDecomposition gd;
  gd.partition = coarse.partition;
  gd.theta = coarse.theta;
  gd.eps = eps;
  gd.delta = delta;
  gd.beta = beta;
  gd.negligible_edges = primary.negligible_edges;
  gd.evil_count = static_cast<int>(primary.evil_vertices.size());
  gd.coarsen_merges = coarse.merges;
  gd.eps_warning = eps > 0.3;
  gd.audit = verify_good(g, gd.partition, gd.theta, eps, delta, beta);
  if (strict && !gd.audit.all_pass)
    throw std::runtime_error("good_decomposition: audit failed");
  return gd;
}

inline GoodAudit verify_good(const Graph& g, const GoodDecomposition& gd) {
  return verify_good(g, gd.partition, gd.theta, gd.eps, gd.delta, gd.beta);
}

struct CheegerCut {
  double phi = 0.0;
  VertexSet set;
};

// Exact Cheeger constant by subset enumeration (n <= 24): min |dS| / vol(S)
// over vol(S) <= |E|. Each complementary pair is scanned once.
inline CheegerCut cheeger_exact(const Graph& g) {
  const int n = g.n();
  if (n > 24) throw std::invalid_argument("cheeger_exact: size guard exceeded (n <= 24)");
  if (n < 2) throw std::invalid_argument("cheeger_exact: need at least two vertices");
  std::vector<std::uint32_t> adj(n, 0);
  std::vector<std::uint64_t> deg(n, 0);
  for (int v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    for (int u : g.neighbors(v)) adj[v] |= 1u << u;
  }
  const std::uint64_t total_vol = 2 * g.m();
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  for (std::uint32_t half = 0; half < (1u << (n - 1)); ++half) {
    const std::uint32_t s = (half << 1) | 1u;  // vertex 0 always inside
    if (s == full) continue;
    std::uint64_t vol = 0, adj_in = 0;
    std::uint32_t rem = s;
    while (rem) {
      const int v = std::countr_zero(rem);
      rem &= rem - 1;
      vol += deg[v];
      adj_in += std::popcount(adj[v] & s);
    }
    const std::uint64_t boundary = vol - adj_in;  // adj_in counts internal edges twice
    if (2 * vol <= total_vol) {
      const double val = static_cast<double>(boundary) / static_cast<double>(vol);
      if (val < best) {
        best = val;
        best_mask = s;
      }
    }
    const std::uint64_t cvol = total_vol - vol;
    if (2 * cvol <= total_vol && cvol > 0) {
      const double val = static_cast<double>(boundary) / static_cast<double>(cvol);
      if (val < best) {
        best = val;
        best_mask = full & ~s;
      }
    }
  }
  CheegerCut out;
  out.phi = best;
  out.set = VertexSet(n);
  for (int v = 0; v < n; ++v)
    if ((best_mask >> v) & 1u) out.set.add(v);
  return out;
}

// Sweep cut along the second eigenvector; always an upper bound on the
// Cheeger constant.
inline CheegerCut cheeger_sweep(const Graph& g) {
  const int n = g.n();
  if (n < 2) throw std::invalid_argument("cheeger_sweep: need at least two vertices");
  const EigenPairs ep = eigenpairs(Network::from_graph(g));
  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double fa = ep.right_vectors(a, 1), fb = ep.right_vectors(b, 1);
    return fa != fb ? fa < fb : a < b;
  });
  const double total_vol = static_cast<double>(2 * g.m());
  VertexSet prefix(n);
  double vol = 0.0;
  long long cut = 0;
  double best = std::numeric_limits<double>::infinity();
  int best_p = 1;
  for (int p = 0; p < n - 1; ++p) {
    const int v = order[p];
    cut += g.degree(v) - 2LL * g.deg_into(v, prefix);
    prefix.add(v);
    vol += g.degree(v);
    const double denom = std::min(vol, total_vol - vol);
    if (denom <= 0.0) continue;
    const double val = static_cast<double>(cut) / denom;
    if (val < best) {
      best = val;
      best_p = p + 1;
    }
  }
  CheegerCut out;
  out.phi = best;
  out.set = VertexSet(n);
  for (int p = 0; p < best_p; ++p) out.set.add(order[p]);
  // report the admissible side (vol <= |E|)
  if (g.volume(out.set) * 2 > 2 * g.m()) out.set = out.set.complement();
  return out;
}

}  // namespace ustlab
