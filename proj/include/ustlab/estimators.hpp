#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ustlab/decomposition.hpp"
#include "ustlab/graph.hpp"
#include "ustlab/network.hpp"
#include "ustlab/rng.hpp"
#include "ustlab/vertex_set.hpp"
#include "ustlab/walk.hpp"

namespace ustlab {

struct BubbleSumResult {
  double value = 0.0;  // certified partial sum: interval is [value, value + tail]
  int t_max = 0;       // truncation level actually used
  double tail = 0.0;
  double rho = 0.0;    // spectral radius of the killed kernel
  std::vector<double> per_t;  // sup_v p^t(v,v) for t = 0..t_max
  double upper() const { return value + tail; }
};

// Sum over t of (t+1) * sup_v Pr_v(X_t = v, walk avoided w so far), with a
// geometric tail certificate from the killed kernel's spectral radius:
// sup_v p^t(v,v) <= rho^t, so the remainder past T is
// rho^{T+1} ((T+2) - (T+1) rho) / (1 - rho)^2.
// t_max < 0 extends the partial sum until the tail drops below 1e-9 (capped).
inline BubbleSumResult bubble_sum(const Network& net, const VertexSet& w, int t_max = -1,
                                  double rho_cap = 1.0 - 1e-9) {
  if (w.universe() != net.n()) throw std::invalid_argument("bubble_sum: universe mismatch");
  if (w.size() == 0) throw std::invalid_argument("bubble_sum: absorbing set must be nonempty");
  if (net.n() > kDenseLimit) throw std::invalid_argument("bubble_sum: size guard exceeded");
  if (!(rho_cap > 0.0) || rho_cap > 1.0) throw std::invalid_argument("bubble_sum: rho_cap in (0,1]");

  BubbleSumResult res;
  const std::vector<int> comp = w.complement().members();
  if (comp.empty()) return res;  // everything absorbs: every term is 0

  const int k = static_cast<int>(comp.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(detail::killed_kernel(net, comp));
  if (solver.info() != Eigen::Success) throw std::runtime_error("bubble_sum: eigensolver failed");
  const Eigen::VectorXd lambda = solver.eigenvalues();
  res.rho = std::max(std::abs(lambda(0)), std::abs(lambda(k - 1)));
  if (res.rho >= rho_cap)
    throw std::domain_error("bubble_sum: killed kernel spectral radius reaches rho_cap; tail diverges");
  const Eigen::MatrixXd sq = solver.eigenvectors().array().square();  // sq(v,j) = U(v,j)^2

  const auto tail_at = [&](long long t) {
    const double r = res.rho;
    return std::pow(r, static_cast<double>(t + 1)) * ((t + 2) - (t + 1) * r) /
           ((1.0 - r) * (1.0 - r));
  };
  constexpr int kAutoCap = 1 << 16;

  Eigen::VectorXd pw = Eigen::VectorXd::Ones(k);  // lambda^t, elementwise
  int t = 0;
  while (true) {
    const double sup = (sq * pw).maxCoeff();
    res.per_t.push_back(std::max(sup, 0.0));
    res.value += (t + 1) * res.per_t.back();
    res.t_max = t;
    res.tail = tail_at(t);
    if (t_max >= 0 ? t >= t_max : (res.tail <= 1e-9 || t >= kAutoCap)) break;
    pw.array() *= lambda.array();
    ++t;
  }
  return res;
}

// Diameter-tail constant: 138420 D^4 B^3 ln(192 D B), for degree ratio D and
// bubble value B.
inline double mns_c3(double d_ratio, double bubble) {
  if (!(d_ratio >= 1.0)) throw std::invalid_argument("mns_c3: degree ratio must be >= 1");
  if (!(bubble >= 1.0)) throw std::invalid_argument("mns_c3: bubble value must be >= 1");
  const double arg = 192.0 * d_ratio * bubble;
  if (arg <= 1.0) throw std::domain_error("mns_c3: log argument must exceed 1");
  return 138420.0 * std::pow(d_ratio, 4) * std::pow(bubble, 3) * std::log(arg);
}

// Pr(diam of the contracted-tree sample >= ell) <= c3 |W| / ell.
inline double diameter_tail_bound(double c3, int w_size, long long ell) {
  if (!(c3 >= 0.0)) throw std::invalid_argument("diameter_tail_bound: c3 must be nonnegative");
  if (w_size < 0) throw std::invalid_argument("diameter_tail_bound: negative set size");
  if (ell < 1) throw std::invalid_argument("diameter_tail_bound: ell >= 1");
  return c3 * static_cast<double>(w_size) / static_cast<double>(ell);
}

struct ProbeResult {
  double estimate = 0.0;
  double std_error = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  bool size_warning = false;
};

// Monte Carlo Pr(simple walk from v touches u within horizon steps); the
// start vertex counts. min_size only flags undersized u, never rejects.
inline ProbeResult probe_hit_large_set(const Graph& g, const VertexSet& u, int v, int horizon,
                                       int trials, RngStream& rng, double min_size = 0.0) {
  if (u.universe() != g.n()) throw std::invalid_argument("probe_hit_large_set: universe mismatch");
  if (v < 0 || v >= g.n()) throw std::invalid_argument("probe_hit_large_set: vertex out of range");
  if (horizon < 0) throw std::invalid_argument("probe_hit_large_set: negative horizon");
  if (trials < 1) throw std::invalid_argument("probe_hit_large_set: need at least one trial");

  ProbeResult res;
  res.trials = trials;
  res.seed = rng.next_u64();
  res.size_warning = static_cast<double>(u.size()) < min_size;
  long long hits = 0;
  for (int trial = 0; trial < trials; ++trial) {
    RngStream s = RngStream::derive(res.seed, static_cast<std::uint64_t>(trial));
    int x = v;
    bool hit = u.contains(x);
    for (int t = 0; t < horizon && !hit; ++t) {
      const auto nbrs = g.neighbors(x);
      if (nbrs.empty()) break;
      x = nbrs[s.below(nbrs.size())];
      hit = u.contains(x);
    }
    hits += hit;
  }
  res.estimate = static_cast<double>(hits) / trials;
  res.std_error = std::sqrt(res.estimate * (1.0 - res.estimate) / trials);
  return res;
}

struct BlockStayProbe {
  std::vector<int> starts;          // members of the probed block
  std::vector<double> escape_freq;  // aligned with starts
  double mean_escape = 0.0;
  double std_error = 0.0;  // pooled over starts * trials
  int horizon = 0;
  int trials = 0;  // per start
  std::uint64_t seed = 0;
  double escape_allowance = 0.0;  // stay threshold is 1 - this
  VertexSet v_prime;
};

// Per-start frequency of the escape event: some step t in [1, horizon] has
// X_t in block i and X_{t+1} outside it, for the simple walk on g over
// horizon = c sqrt(n). v_prime keeps the starts whose empirical stay
// probability is at least 1 - 80 c theta^2 eps^9 / delta^6.
inline BlockStayProbe probe_stay_in_block(const Graph& g, const GoodDecomposition& gd, int i,
                                          double c, int trials, RngStream& rng) {
  if (i < 0 || i >= gd.partition.k) throw std::invalid_argument("probe_stay_in_block: block out of range");
  if (trials < 1) throw std::invalid_argument("probe_stay_in_block: need at least one trial");
  if (!(c > 0.0)) throw std::invalid_argument("probe_stay_in_block: c must be positive");

  const VertexSet block = gd.partition.block(i);
  BlockStayProbe res;
  res.starts = block.members();
  res.horizon = std::max(1, static_cast<int>(std::floor(c * std::sqrt(static_cast<double>(g.n())))));
  res.trials = trials;
  res.seed = rng.next_u64();
  res.escape_allowance =
      80.0 * c * gd.theta * gd.theta * std::pow(gd.eps, 9) / std::pow(gd.delta, 6);
  res.v_prime = VertexSet(g.n());

  long long total_escapes = 0;
  for (std::size_t si = 0; si < res.starts.size(); ++si) {
    RngStream s = RngStream::derive(res.seed, static_cast<std::uint64_t>(si));
    int escapes = 0;
    for (int trial = 0; trial < trials; ++trial) {
      int x = res.starts[si];
      bool prev_in = block.contains(x);
      bool escaped = false;
      // transitions (X_t, X_{t+1}) for t = 1..horizon need horizon+1 steps
      for (int t = 1; t <= res.horizon + 1; ++t) {
        const auto nbrs = g.neighbors(x);
        if (nbrs.empty()) break;
        x = nbrs[s.below(nbrs.size())];
        const bool now_in = block.contains(x);
        if (t >= 2 && prev_in && !now_in) {
          escaped = true;
          break;
        }
        prev_in = now_in;
      }
      escapes += escaped;
    }
    const double freq = static_cast<double>(escapes) / trials;
    res.escape_freq.push_back(freq);
    total_escapes += escapes;
    if (freq <= res.escape_allowance) res.v_prime.add(res.starts[si]);
  }
  const double all = static_cast<double>(res.starts.size()) * trials;
  res.mean_escape = static_cast<double>(total_escapes) / all;
  res.std_error = std::sqrt(res.mean_escape * (1.0 - res.mean_escape) / all);
  return res;
}

// The two probed starts most likely to stay put (ties to smaller vertex id);
// stand-in for the existential endpoint choice in the path experiment.
inline std::pair<int, int> select_path_endpoints(const BlockStayProbe& probe) {
  if (probe.starts.size() < 2)
    throw std::invalid_argument("select_path_endpoints: need at least two starts");
  std::vector<std::size_t> idx(probe.starts.size());
  for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (probe.escape_freq[a] != probe.escape_freq[b])
      return probe.escape_freq[a] < probe.escape_freq[b];
    return probe.starts[a] < probe.starts[b];
  });
  return {probe.starts[idx[0]], probe.starts[idx[1]]};
}

}  // namespace ustlab
