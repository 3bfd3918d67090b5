#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ustlab/network.hpp"
#include "ustlab/partition.hpp"
#include "ustlab/walk.hpp"

namespace ustlab {

struct SpectralSummary {
  std::vector<double> eigenvalues;  // descending, eigenvalues of the transition kernel
  double gap = 0.0;                 // 1 - lambda_2 (second largest with multiplicity)
  double trace_p2 = 0.0;            // trace(P^2), summed directly from the kernel

  double lambda2() const { return eigenvalues.size() > 1 ? eigenvalues[1] : 1.0; }
};

namespace detail {

// trace(P^2) = sum_{u,v} P(u,v) P(v,u), accumulated edgewise so the value is
// independent of the eigensolve (the two routes cross-check each other).
inline double trace_p2_direct(const Network& net, WalkMode mode) {
  double off = 0.0;
  std::vector<double> diag(net.n(), 0.0);
  for (int u = 0; u < net.n(); ++u) {
    if (net.strength(u) == 0.0) {
      diag[u] = 1.0;
      continue;
    }
    for (const Network::Arc& a : net.arcs(u)) {
      const double puv = a.w / net.strength(u);
      if (a.to == u) {
        diag[u] = puv;
      } else {
        off += puv * (a.w / net.strength(a.to));
      }
    }
  }
  double total = 0.0;
  if (mode == WalkMode::lazy) {
    for (double d : diag) total += (0.5 + 0.5 * d) * (0.5 + 0.5 * d);
    total += 0.25 * off;
  } else {
    for (double d : diag) total += d * d;
    total += off;
  }
  return total;
}

}  // namespace detail

// Full spectrum of the simple or lazy kernel via the symmetrized form.
inline SpectralSummary spectrum(const Network& net, WalkMode mode = WalkMode::simple) {
  if (mode == WalkMode::lazy_vector)
    throw std::invalid_argument("spectrum: build the lazy-vector chain explicitly first");
  if (net.n() == 0) throw std::invalid_argument("spectrum: empty network");
  const detail::NetworkEigen ne = detail::network_eigen(net, mode);
  SpectralSummary s;
  s.eigenvalues.assign(ne.lambda.data(), ne.lambda.data() + ne.lambda.size());
  s.gap = net.n() > 1 ? 1.0 - s.eigenvalues[1] : 1.0;
  if (s.gap < 0.0 && s.gap > -1e-12) s.gap = 0.0;
  s.trace_p2 = detail::trace_p2_direct(net, mode);
  return s;
}

inline SpectralSummary spectrum(const Graph& g, WalkMode mode = WalkMode::simple) {
  return spectrum(Network::from_graph(g), mode);
}

// Right eigenpairs of the kernel (f_j = D^{-1/2} u_j), for sweeps and
// residual checks.
struct EigenPairs {
  Eigen::VectorXd lambda;        // descending
  Eigen::MatrixXd right_vectors; // column j pairs with lambda(j)
};

inline EigenPairs eigenpairs(const Network& net, WalkMode mode = WalkMode::simple) {
  const detail::NetworkEigen ne = detail::network_eigen(net, mode);
  EigenPairs ep;
  ep.lambda = ne.lambda;
  ep.right_vectors = ne.vecs;
  for (int v = 0; v < net.n(); ++v) ep.right_vectors.row(v) /= ne.sqrt_s(v);
  return ep;
}

// Dirichlet form (1/2) sum_{x,y} pi(x) P(x,y) (f(x)-f(y))^2. The lazy kernel
// halves every off-diagonal rate, so the form halves too.
inline double dirichlet_form(const Network& net, const std::vector<double>& f,
                             WalkMode mode = WalkMode::simple) {
  if (mode == WalkMode::lazy_vector)
    throw std::invalid_argument("dirichlet_form: build the lazy-vector chain explicitly first");
  if (static_cast<int>(f.size()) != net.n())
    throw std::invalid_argument("dirichlet_form: size mismatch");
  double acc = 0.0;
  for (int u = 0; u < net.n(); ++u)
    for (const Network::Arc& a : net.arcs(u)) {
      if (u >= a.to) continue;
      const double d = f[u] - f[a.to];
      acc += (a.w / net.total_strength()) * d * d;
    }
  return mode == WalkMode::lazy ? 0.5 * acc : acc;
}

// Generic reversible chain given explicitly; detailed balance is validated on
// construction.
struct ReversibleChain {
  Eigen::MatrixXd p;
  Eigen::VectorXd pi;

  int n() const { return static_cast<int>(pi.size()); }

  void validate(double tol = 1e-9) const {
    if (p.rows() != p.cols() || p.rows() != pi.size())
      throw std::invalid_argument("ReversibleChain: shape mismatch");
    for (int i = 0; i < n(); ++i) {
      if (!(pi(i) > 0.0)) throw std::invalid_argument("ReversibleChain: pi must be positive");
      if (std::abs(p.row(i).sum() - 1.0) > tol)
        throw std::invalid_argument("ReversibleChain: rows must sum to 1");
    }
    for (int i = 0; i < n(); ++i)
      for (int j = i + 1; j < n(); ++j)
        if (std::abs(pi(i) * p(i, j) - pi(j) * p(j, i)) > tol)
          throw std::invalid_argument("ReversibleChain: detailed balance violated");
  }

  std::vector<double> eigenvalues() const {
    Eigen::VectorXd root = pi.array().sqrt();
    Eigen::MatrixXd s = root.asDiagonal() * p * root.cwiseInverse().asDiagonal();
    s = 0.5 * (s + s.transpose());  // scrub roundoff; detailed balance already checked
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
    std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + n());
    std::reverse(ev.begin(), ev.end());
    return ev;
  }

  double gap() const {
    if (n() <= 1) return 1.0;
    const auto ev = eigenvalues();
    return std::max(0.0, 1.0 - ev[1]);
  }
};

// Projection chain on blocks: Pbar(i,j) = (1/pibar(i)) sum_{v in Vi, u in Vj} pi(v) P(v,u).
inline ReversibleChain projection_chain(const Network& net, const Partition& part) {
  if (part.n != net.n()) throw std::invalid_argument("projection_chain: size mismatch");
  const int k = part.k;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(k);
  for (int u = 0; u < net.n(); ++u) {
    const int bu = part.block_of[u];
    s(bu) += net.strength(u);
    // adjacency lists enumerate each ordered pair (u,v) once and self-loops once,
    // which is exactly the ordered sum defining the projection kernel
    for (const Network::Arc& a : net.arcs(u)) w(bu, part.block_of[a.to]) += a.w;
  }
  ReversibleChain ch;
  ch.p = Eigen::MatrixXd::Zero(k, k);
  ch.pi = s / net.total_strength();
  for (int i = 0; i < k; ++i) {
    if (!(s(i) > 0.0)) throw std::invalid_argument("projection_chain: block with zero strength");
    ch.p.row(i) = w.row(i) / s(i);
  }
  ch.validate();
  return ch;
}

// Restriction chain on V_i: off-block mass folds into the diagonal.
inline ReversibleChain restriction_chain(const Network& net, const Partition& part, int i) {
  if (part.n != net.n()) throw std::invalid_argument("restriction_chain: size mismatch");
  if (i < 0 || i >= part.k) throw std::invalid_argument("restriction_chain: block out of range");
  const auto members = part.block(i).members();
  const int k = static_cast<int>(members.size());
  std::vector<int> idx(net.n(), -1);
  for (int a = 0; a < k; ++a) idx[members[a]] = a;
  ReversibleChain ch;
  ch.p = Eigen::MatrixXd::Zero(k, k);
  ch.pi = Eigen::VectorXd::Zero(k);
  double block_strength = 0.0;
  for (int a = 0; a < k; ++a) {
    const int x = members[a];
    block_strength += net.strength(x);
    if (net.strength(x) == 0.0) {
      ch.p(a, a) = 1.0;
      continue;
    }
    double off = 0.0;
    for (const Network::Arc& arc : net.arcs(x)) {
      if (arc.to == x) continue;
      const int b = idx[arc.to];
      if (b >= 0) {
        ch.p(a, b) = arc.w / net.strength(x);
        off += ch.p(a, b);
      }
    }
    ch.p(a, a) = 1.0 - off;
  }
  if (!(block_strength > 0.0)) throw std::invalid_argument("restriction_chain: block with zero strength");
  for (int a = 0; a < k; ++a)
    ch.pi(a) = net.strength(members[a]) > 0.0 ? net.strength(members[a]) / block_strength
                                              : 1e-300;  // isolated member, absorbing
  if ((ch.pi.array() <= 0.0).any()) throw std::invalid_argument("restriction_chain: degenerate pi");
  ch.validate();
  return ch;
}

// Spectral-gap lower bound by chain decomposition: gap >= gap(Pbar) * min_i gap(P_i) / 6.
// A trivial one-block partition short-circuits to the plain gap.
inline double jsvt_lower_bound(const Network& net, const Partition& part) {
  if (part.k == 1) return spectrum(net).gap;
  const double bar = projection_chain(net, part).gap();
  double worst_block = 1.0;
  for (int i = 0; i < part.k; ++i)
    worst_block = std::min(worst_block, restriction_chain(net, part, i).gap());
  return bar * worst_block / 6.0;
}

// Self-loops implementing per-vertex holding probabilities p_v in [0, 1):
// the simple walk on the returned network is the lazy-vector chain.
inline Network lazy_vector_chain(const Network& net, const std::vector<double>& p) {
  if (static_cast<int>(p.size()) != net.n())
    throw std::invalid_argument("lazy_vector_chain: size mismatch");
  for (double x : p)
    if (!(x >= 0.0) || x >= 1.0)
      throw std::invalid_argument("lazy_vector_chain: entries must lie in [0, 1)");
  std::vector<std::tuple<int, int, double>> es;
  for (auto [u, v, w] : net.weighted_edges()) {
    double w2 = w;
    if (u == v) w2 += p[u] * net.strength(u) / (1.0 - p[u]);
    es.emplace_back(u, v, w2);
  }
  for (int v = 0; v < net.n(); ++v) {
    if (p[v] == 0.0 || net.weight(v, v) > 0.0 || net.strength(v) == 0.0) continue;
    es.emplace_back(v, v, p[v] * net.strength(v) / (1.0 - p[v]));
  }
  return Network::from_weighted_edges(net.n(), es);
}

// gap(Q) >= (1 - alpha) * gap(P) when every holding probability is < alpha.
inline double lazy_vector_gap_bound(double gap_p, double alpha) {
  if (!(alpha >= 0.0) || alpha >= 1.0)
    throw std::invalid_argument("lazy_vector_gap_bound: alpha in [0, 1)");
  if (gap_p < 0.0) throw std::invalid_argument("lazy_vector_gap_bound: negative gap");
  return (1.0 - alpha) * gap_p;
}

namespace detail {

// Deterministic BFS shortest path (neighbors scanned ascending).
inline std::vector<std::vector<int>> bfs_parents(const Network& net, int src) {
  std::vector<int> parent(net.n(), -2);
  std::vector<int> queue{src};
  parent[src] = -1;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const int v = queue[h];
    for (const Network::Arc& a : net.arcs(v)) {
      if (a.to == v || parent[a.to] != -2) continue;
      parent[a.to] = v;
      queue.push_back(a.to);
    }
  }
  std::vector<std::vector<int>> paths(net.n());
  for (int y = 0; y < net.n(); ++y) {
    if (parent[y] == -2) continue;  // unreachable
    std::vector<int> rev;
    for (int x = y; x != -1; x = parent[x]) rev.push_back(x);
    paths[y].assign(rev.rbegin(), rev.rend());
  }
  return paths;
}

}  // namespace detail

// Canonical path bound: gap >= 1/B with
// B = max_e (1/Q(e)) sum_{paths through e} pi(x) pi(y) |path|, over directed
// edges e, one path per ordered pair. Default paths are BFS-lexicographic.
inline double path_method_bound(const Network& net,
                                const std::vector<std::vector<std::vector<int>>>* paths = nullptr) {
  const int n = net.n();
  if (n <= 1) return 1.0;
  if (!net.is_connected()) throw std::invalid_argument("path_method_bound: disconnected network");
  const Distribution pi = stationary(net);
  std::vector<std::vector<std::vector<int>>> built;
  if (!paths) {
    built.resize(n);
    for (int x = 0; x < n; ++x) built[x] = detail::bfs_parents(net, x);
    paths = &built;
  }
  std::unordered_map<long long, double> load;
  for (int x = 0; x < n; ++x) {
    if (static_cast<int>((*paths)[x].size()) != n)
      throw std::invalid_argument("path_method_bound: need a path for every ordered pair");
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      const std::vector<int>& ph = (*paths)[x][y];
      if (ph.size() < 2 || ph.front() != x || ph.back() != y)
        throw std::invalid_argument("path_method_bound: path endpoints mismatch");
      const double contribution = pi.p[x] * pi.p[y] * static_cast<double>(ph.size() - 1);
      for (std::size_t i = 0; i + 1 < ph.size(); ++i) {
        const int u = ph[i], v = ph[i + 1];
        if (u == v || !(net.weight(u, v) > 0.0))
          throw std::invalid_argument("path_method_bound: path uses a non-edge");
        load[static_cast<long long>(u) * n + v] += contribution;
      }
    }
  }
  double b = 0.0;
  for (const auto& [key, total] : load) {
    const int u = static_cast<int>(key / n), v = static_cast<int>(key % n);
    const double q = net.weight(u, v) / net.total_strength();  // pi(u) P(u,v)
    b = std::max(b, total / q);
  }
  return 1.0 / b;
}

inline double path_method_bound(const Graph& g) { return path_method_bound(Network::from_graph(g)); }

struct HypothesisViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lower bound for a partitioned graph: gap >= min{a, a*b*c / (6 k n^3)},
// given per-block gaps >= a, in-block degrees >= b, and H(partition, c)
// connected. Hypotheses are verified, not assumed.
inline double decomposition_gap_bound(const Graph& g, const Partition& part, double a, double b, double c) {
  if (part.n != g.n()) throw std::invalid_argument("decomposition_gap_bound: size mismatch");
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
    throw std::invalid_argument("decomposition_gap_bound: a, b, c must be positive");
  const auto blocks = part.blocks();
  for (int i = 0; i < part.k; ++i) {
    const auto sub = g.induced_subgraph(blocks[i]);
    const double gi = sub.graph.n() > 1 ? spectrum(sub.graph).gap : 1.0;
    if (gi < a - 1e-12)
      throw HypothesisViolation("decomposition_gap_bound: block " + std::to_string(i) +
                                " has gap " + std::to_string(gi) + " < a");
  }
  for (int v = 0; v < g.n(); ++v)
    if (g.deg_into(v, blocks[part.block_of[v]]) < b - 1e-12)
      throw HypothesisViolation("decomposition_gap_bound: vertex " + std::to_string(v) +
                                " has in-block degree below b");
  if (!h_graph(g, part, c).is_connected())
    throw HypothesisViolation("decomposition_gap_bound: H(partition, c) is disconnected");
  if (part.k == 1) return a;  // single block: the hypothesis itself is the bound
  const double n3 = std::pow(static_cast<double>(g.n()), 3);
  return std::min(a, a * b * c / (6.0 * part.k * n3));
}

// Derive usable (a, b, c) for a partition: a = worst block gap, b = worst
// in-block degree, c = just under the bottleneck keeping H connected.
struct DecompositionBoundParams {
  double a = 0.0, b = 0.0, c = 0.0;
};

inline std::optional<DecompositionBoundParams> decomposition_bound_params(const Graph& g, const Partition& part) {
  DecompositionBoundParams out;
  out.a = 1.0;
  for (const VertexSet& blk : part.blocks()) {
    const auto sub = g.induced_subgraph(blk);
    out.a = std::min(out.a, sub.graph.n() > 1 ? spectrum(sub.graph).gap : 1.0);
  }
  out.b = static_cast<double>(g.n());
  for (int v = 0; v < g.n(); ++v)
    out.b = std::min(out.b, static_cast<double>(g.deg_into(v, part.block(part.block_of[v]))));
  if (!(out.a > 0.0) || !(out.b > 0.0)) return std::nullopt;
  if (part.k == 1) {
    out.c = 1.0;
    return out;
  }
  const auto cut = block_cut_matrix(g, part);
  std::vector<double> values;
  for (int i = 0; i < part.k; ++i)
    for (int j = i + 1; j < part.k; ++j)
      if (cut[i][j] > 0) values.push_back(static_cast<double>(cut[i][j]));
  std::sort(values.begin(), values.end());
  double best = -1.0;
  for (double v : values) {
    const double c = v - 0.5;
    if (c > 0.0 && h_graph(g, part, c).is_connected()) best = std::max(best, c);
  }
  if (best <= 0.0) {
    if (!h_graph(g, part, 0.5).is_connected()) return std::nullopt;
    best = 0.5;
  }
  out.c = best;
  return out;
}

}  // namespace ustlab
