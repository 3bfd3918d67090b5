#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ustlab/network.hpp"
#include "ustlab/rng.hpp"
#include "ustlab/vertex_set.hpp"

namespace ustlab {

inline constexpr int kDenseLimit = 4096;  // guard for dense spectral/powering work

// Probability vector over vertices.
struct Distribution {
  std::vector<double> p;

  Distribution() = default;
  explicit Distribution(std::vector<double> probs) : p(std::move(probs)) {}

  static Distribution point_mass(int n, int v) {
    Distribution d;
    d.p.assign(n, 0.0);
    d.p.at(v) = 1.0;
    return d;
  }

  int size() const { return static_cast<int>(p.size()); }
  double operator[](int i) const { return p[i]; }

  bool valid(double tol = 1e-12) const {
    double sum = 0.0;
    for (double x : p) {
      if (x < -tol) return false;
      sum += x;
    }
    return std::abs(sum - 1.0) <= std::max(tol, 1e-12 * p.size());
  }
};

inline double tv_distance(const Distribution& a, const Distribution& b) {
  if (a.size() != b.size()) throw std::invalid_argument("tv_distance: size mismatch");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += std::abs(a.p[i] - b.p[i]);
  return 0.5 * s;
}

// pi(v) = strength(v) / total strength. Requires a connected network.
inline Distribution stationary(const Network& net) {
  if (!net.is_connected()) throw std::invalid_argument("stationary: disconnected network");
  Distribution d;
  d.p.resize(net.n());
  for (int v = 0; v < net.n(); ++v) d.p[v] = net.strength(v) / net.total_strength();
  return d;
}

enum class WalkMode { simple, lazy, lazy_vector };

enum class StoppedBy { step_budget, hit_target, hit_rho };

struct WalkSpec {
  WalkMode mode = WalkMode::simple;
  std::vector<double> lazy_p;  // per-vertex holding probabilities, mode lazy_vector only
  std::optional<std::uint64_t> budget;
  const VertexSet* target = nullptr;
  std::optional<int> rho;  // hitting this target vertex reports hit_rho

  void validate(int n) const {
    if (mode == WalkMode::lazy_vector) {
      if (static_cast<int>(lazy_p.size()) != n)
        throw std::invalid_argument("walk: lazy_p size mismatch");
      for (double p : lazy_p)
        if (!(p >= 0.0) || p >= 1.0)
          throw std::invalid_argument("walk: lazy_p entries must lie in [0, 1)");
    }
    if (!budget && !target) throw std::invalid_argument("walk: no stopping rule");
  }
};

struct WalkTrace {
  std::vector<int> vertices;  // X_0, X_1, ... ; consecutive entries adjacent or equal (lazy hold)
  StoppedBy stopped_by = StoppedBy::step_budget;
  std::uint64_t seed = 0;

  std::uint64_t steps() const { return vertices.size() - 1; }
};

inline WalkTrace walk(const Network& net, int start, const WalkSpec& spec, RngStream& rng) {
  if (start < 0 || start >= net.n()) throw std::invalid_argument("walk: start out of range");
  spec.validate(net.n());
  WalkTrace tr;
  tr.seed = rng.seed();
  tr.vertices.push_back(start);
  int v = start;
  auto hit = [&](int u) {
    return spec.target && spec.target->contains(u);
  };
  if (hit(v)) {
    tr.stopped_by = (spec.rho && *spec.rho == v) ? StoppedBy::hit_rho : StoppedBy::hit_target;
    return tr;
  }
  std::uint64_t steps = 0;
  while (!spec.budget || steps < *spec.budget) {
    int next = v;
    switch (spec.mode) {
      case WalkMode::simple:
        next = net.random_neighbor(v, rng);
        break;
      case WalkMode::lazy:
        next = rng.bernoulli(0.5) ? v : net.random_neighbor(v, rng);
        break;
      case WalkMode::lazy_vector:
        next = rng.bernoulli(spec.lazy_p[v]) ? v : net.random_neighbor(v, rng);
        break;
    }
    tr.vertices.push_back(next);
    ++steps;
    v = next;
    if (hit(v)) {
      tr.stopped_by = (spec.rho && *spec.rho == v) ? StoppedBy::hit_rho : StoppedBy::hit_target;
      return tr;
    }
  }
  tr.stopped_by = StoppedBy::step_budget;
  return tr;
}

// One exact step of the chain: out(u) = sum_v d(v) P(v, u).
inline Distribution step_distribution(const Network& net, const Distribution& d, WalkMode mode) {
  if (mode == WalkMode::lazy_vector)
    throw std::invalid_argument("step_distribution: lazy_vector not supported, build the chain explicitly");
  if (d.size() != net.n()) throw std::invalid_argument("step_distribution: size mismatch");
  Distribution out;
  out.p.assign(net.n(), 0.0);
  for (int v = 0; v < net.n(); ++v) {
    const double mass = d.p[v];
    if (mass == 0.0) continue;
    if (net.strength(v) == 0.0) {
      out.p[v] += mass;  // isolated vertices hold
      continue;
    }
    for (const Network::Arc& a : net.arcs(v)) out.p[a.to] += mass * (a.w / net.strength(v));
  }
  if (mode == WalkMode::lazy)
    for (int v = 0; v < net.n(); ++v) out.p[v] = 0.5 * d.p[v] + 0.5 * out.p[v];
  return out;
}

namespace detail {

// Eigendecomposition of the symmetrized kernel S = D^{1/2} P D^{-1/2},
// S(u,v) = w(u,v)/sqrt(s(u) s(v)). Same spectrum as P; P^t reconstructs as
// p^t(v,u) = S^t(v,u) * sqrt(s(u)/s(v)). Isolated vertices hold in place.
struct NetworkEigen {
  Eigen::VectorXd sqrt_s;
  Eigen::VectorXd lambda;  // descending
  Eigen::MatrixXd vecs;    // columns aligned with lambda
};

inline Eigen::MatrixXd symmetric_kernel(const Network& net, WalkMode mode) {
  const int n = net.n();
  if (n > kDenseLimit) throw std::invalid_argument("dense kernel: size guard exceeded");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    if (net.strength(u) == 0.0) {
      s(u, u) = 1.0;
      continue;
    }
    for (const Network::Arc& a : net.arcs(u))
      s(u, a.to) = a.w / std::sqrt(net.strength(u) * net.strength(a.to));
  }
  if (mode == WalkMode::lazy)
    s = 0.5 * (Eigen::MatrixXd::Identity(n, n) + s);
  return s;
}

inline NetworkEigen network_eigen(const Network& net, WalkMode mode) {
  const int n = net.n();
  NetworkEigen ne;
  ne.sqrt_s.resize(n);
  for (int v = 0; v < n; ++v)
    ne.sqrt_s(v) = net.strength(v) > 0.0 ? std::sqrt(net.strength(v)) : 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric_kernel(net, mode));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed to converge");
  // Eigen returns ascending; flip to descending.
  ne.lambda = solver.eigenvalues().reverse();
  ne.vecs = solver.eigenvectors().rowwise().reverse();
  return ne;
}

}  // namespace detail

// Least t with worst-start TV distance to stationarity <= eps, for the lazy

// walk. Worst-start TV is non-increasing in t, so after an exponential search
// the answer is found by bisection; P^t comes from the eigendecomposition.
inline int mixing_time_exact(const Network& net, double eps) {
  if (!(eps > 0.0) || eps >= 1.0) throw std::invalid_argument("mixing_time_exact: eps in (0,1)");
  if (net.n() > kDenseLimit) throw std::invalid_argument("mixing_time_exact: size guard exceeded");
  const Distribution pi = stationary(net);  // also rejects disconnected input
  const int n = net.n();
  if (n == 1) return 0;
  const detail::NetworkEigen ne = detail::network_eigen(net, WalkMode::lazy);

  auto worst_tv = [&](long long t) -> double {
    Eigen::VectorXd powed(n);
    for (int j = 0; j < n; ++j) powed(j) = std::pow(ne.lambda(j), static_cast<double>(t));
    Eigen::MatrixXd st = ne.vecs * powed.asDiagonal() * ne.vecs.transpose();
    double worst = 0.0;
    for (int v = 0; v < n; ++v) {
      double acc = 0.0;
      for (int u = 0; u < n; ++u)
        acc += std::abs(st(v, u) * ne.sqrt_s(u) / ne.sqrt_s(v) - pi.p[u]);
      worst = std::max(worst, 0.5 * acc);
    }
    return worst;
  };

  if (worst_tv(0) <= eps) return 0;
  long long hi = 1;
  while (worst_tv(hi) > eps) {
    hi *= 2;
    if (hi > (1LL << 40)) throw std::runtime_error("mixing_time_exact: failed to converge");
  }
  long long lo = hi / 2;  // worst_tv(lo) > eps
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (worst_tv(mid) <= eps ? hi : lo) = mid;
  }
  return static_cast<int>(hi);
}

// ceil(log2 n) + ceil(log(sqrt(2)/(eps*delta)) / gamma), valid for the lazy
// walk on graphs with min degree >= delta*n whose lazy gap is gamma.
inline double mixing_time_upper_bound(double gamma, int n, double eps, double delta) {
  if (!(gamma > 0.0) || gamma > 1.0) throw std::invalid_argument("mixing_time_upper_bound: gamma in (0,1]");
  if (n < 1) throw std::invalid_argument("mixing_time_upper_bound: n >= 1");
  if (!(eps > 0.0) || !(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("mixing_time_upper_bound: eps > 0, delta in (0,1]");
  return std::ceil(std::log2(static_cast<double>(n))) +
         std::ceil(std::log(std::sqrt(2.0) / (eps * delta)) / gamma);
}

namespace detail {

// Symmetrized kernel restricted to the vertices in comp (everything else
// absorbs); has the same diagonal powers as the killed P.
inline Eigen::MatrixXd killed_kernel(const Network& net, const std::vector<int>& comp) {
  const int k = static_cast<int>(comp.size());
  std::vector<int> idx(net.n(), -1);
  for (int i = 0; i < k; ++i) idx[comp[i]] = i;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    const int u = comp[i];
    if (net.strength(u) == 0.0) {
      s(i, i) = 1.0;
      continue;
    }
    for (const Network::Arc& a : net.arcs(u))
      if (idx[a.to] >= 0)
        s(i, idx[a.to]) = a.w / std::sqrt(net.strength(u) * net.strength(a.to));
  }
  return s;
}

}  // namespace detail

// Pr_v(X_t = v, walk has not entered w up to time t); the killed kernel is
// the principal submatrix of P on the complement of w.
inline double killed_return_prob(const Network& net, const VertexSet& w, int v, int t) {
  if (w.universe() != net.n()) throw std::invalid_argument("killed_return_prob: universe mismatch");
  if (v < 0 || v >= net.n()) throw std::invalid_argument("killed_return_prob: vertex out of range");
  if (t < 0) throw std::invalid_argument("killed_return_prob: negative time");
  if (w.contains(v)) return 0.0;
  if (t == 0) return 1.0;
  const std::vector<int> comp = w.complement().members();
  const int k = static_cast<int>(comp.size());
  if (k > kDenseLimit) throw std::invalid_argument("killed_return_prob: size guard exceeded");
  std::vector<int> idx(net.n(), -1);
  for (int i = 0; i < k; ++i) idx[comp[i]] = i;
  const Eigen::MatrixXd s = detail::killed_kernel(net, comp);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
  x(idx[v]) = 1.0;
  for (int step = 0; step < t; ++step) x = s * x;
  return x(idx[v]);
}

}  // namespace ustlab
