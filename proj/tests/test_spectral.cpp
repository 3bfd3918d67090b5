#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "ustlab.hpp"

using namespace ustlab;

namespace {

Graph random_connected(int n, double p, RngStream& rng) {
  for (;;) {
    Graph g = dense_gnp(n, p, rng);
    if (g.is_connected()) return g;
  }
}

Network random_weighted(int n, double p, RngStream& rng) {
  const Graph g = random_connected(n, p, rng);
  std::vector<std::tuple<int, int, double>> es;
  for (auto [u, v] : g.edges()) es.emplace_back(u, v, 0.5 + 1.5 * rng.uniform());
  return Network::from_weighted_edges(n, es);
}

Eigen::MatrixXd kernel_matrix(const Network& net, WalkMode mode) {
  const int n = net.n();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (const Network::Arc& a : net.arcs(u)) p(u, a.to) += a.w / net.strength(u);
  if (mode == WalkMode::lazy) p = 0.5 * (Eigen::MatrixXd::Identity(n, n) + p);
  return p;
}

Partition random_partition(int n, int k, RngStream& rng) {
  std::vector<int> bo(n);
  for (int v = 0; v < n; ++v) bo[v] = static_cast<int>(rng.below(k));
  for (int i = 0; i < k; ++i) bo[i] = i;  // keep every block inhabited
  return Partition::from_block_of(bo);
}

}  // namespace

TEST_CASE("spectrum of complete graphs", "[spectral][spectrum]") {
  for (int n : {4, 5, 6}) {
    const SpectralSummary s = spectrum(complete_graph(n));
    REQUIRE(s.eigenvalues.size() == static_cast<std::size_t>(n));
    REQUIRE(s.eigenvalues[0] == Catch::Approx(1.0).margin(1e-9));
    for (int i = 1; i < n; ++i)
      REQUIRE(s.eigenvalues[i] == Catch::Approx(-1.0 / (n - 1)).margin(1e-9));
    REQUIRE(s.gap == Catch::Approx(static_cast<double>(n) / (n - 1)).margin(1e-9));
  }
  REQUIRE(spectrum(complete_graph(4)).gap == Catch::Approx(4.0 / 3.0).margin(1e-12));

  RngStream rng(41);
  for (int it = 0; it < 10; ++it) {
    const Network net = random_weighted(4 + static_cast<int>(rng.below(12)), 0.6, rng);
    const SpectralSummary s = spectrum(net);
    REQUIRE(s.gap >= 0.0);
    REQUIRE(s.gap <= 2.0 + 1e-12);
    for (double ev : s.eigenvalues) {
      REQUIRE(ev >= -1.0 - 1e-9);
      REQUIRE(ev <= 1.0 + 1e-9);
    }
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i)
      REQUIRE(s.eigenvalues[i - 1] >= s.eigenvalues[i] - 1e-12);
  }
}

TEST_CASE("lazy spectrum is the affine image of the simple one", "[spectral][lazy]") {
  RngStream rng(42);
  for (int it = 0; it < 10; ++it) {
    const Network net = random_weighted(4 + static_cast<int>(rng.below(10)), 0.5, rng);
    const SpectralSummary simple = spectrum(net, WalkMode::simple);
    const SpectralSummary lazy = spectrum(net, WalkMode::lazy);
    REQUIRE(lazy.gap == Catch::Approx(simple.gap / 2.0).margin(1e-10));
    for (std::size_t i = 0; i < simple.eigenvalues.size(); ++i)
      REQUIRE(lazy.eigenvalues[i] ==
              Catch::Approx(0.5 * (1.0 + simple.eigenvalues[i])).margin(1e-10));
  }
}

TEST_CASE("squared eigenvalues sum to the direct two-step trace", "[spectral][trace]") {
  RngStream rng(43);
  for (int it = 0; it < 10; ++it) {
    const Network net = random_weighted(4 + static_cast<int>(rng.below(12)), 0.6, rng);
    for (WalkMode mode : {WalkMode::simple, WalkMode::lazy}) {
      const SpectralSummary s = spectrum(net, mode);
      double sq = 0.0;
      for (double ev : s.eigenvalues) sq += ev * ev;
      REQUIRE(sq == Catch::Approx(s.trace_p2).margin(1e-8));
    }
  }

  // a network with a self-loop
  const Network loop = Network::from_weighted_edges(2, {{0, 1, 1.0}, {0, 0, 1.0}});
  const SpectralSummary s = spectrum(loop);
  double sq = 0.0;
  for (double ev : s.eigenvalues) sq += ev * ev;
  REQUIRE(sq == Catch::Approx(s.trace_p2).margin(1e-10));
  REQUIRE(s.trace_p2 == Catch::Approx(1.25).margin(1e-12));
  REQUIRE(s.gap == Catch::Approx(1.5).margin(1e-10));
}

TEST_CASE("eigenpairs satisfy the eigen equation", "[spectral][eigenpairs]") {
  RngStream rng(44);
  const Network net = random_weighted(10, 0.6, rng);
  const EigenPairs ep = eigenpairs(net);
  const Eigen::MatrixXd p = kernel_matrix(net, WalkMode::simple);
  for (int j = 0; j < net.n(); ++j) {
    const Eigen::VectorXd r = ep.right_vectors.col(j);
    const Eigen::VectorXd residual = p * r - ep.lambda(j) * r;
    REQUIRE(residual.cwiseAbs().maxCoeff() <= 1e-8);
  }
  for (int j = 1; j < net.n(); ++j) REQUIRE(ep.lambda(j - 1) >= ep.lambda(j) - 1e-12);
}

TEST_CASE("dirichlet form", "[spectral][dirichlet]") {
  const Network k2 = Network::from_graph(complete_graph(2));
  REQUIRE(dirichlet_form(k2, {0.0, 1.0}, WalkMode::lazy) == Catch::Approx(0.25).margin(1e-14));
  REQUIRE(dirichlet_form(k2, {0.0, 1.0}, WalkMode::simple) == Catch::Approx(0.5).margin(1e-14));
  REQUIRE(dirichlet_form(k2, {3.0, 3.0}) == Catch::Approx(0.0).margin(1e-14));
  REQUIRE_THROWS_AS(dirichlet_form(k2, {1.0}), std::invalid_argument);

  // E(f) = <f, (I - P) f>_pi
  RngStream rng(45);
  for (int it = 0; it < 10; ++it) {
    const Network net = random_weighted(4 + static_cast<int>(rng.below(8)), 0.7, rng);
    std::vector<double> f(net.n());
    for (double& x : f) x = rng.uniform() * 4.0 - 2.0;
    const Distribution pi = stationary(net);
    for (WalkMode mode : {WalkMode::simple, WalkMode::lazy}) {
      const Eigen::MatrixXd p = kernel_matrix(net, mode);
      double inner = 0.0;
      for (int u = 0; u < net.n(); ++u) {
        double pf = 0.0;
        for (int v = 0; v < net.n(); ++v) pf += p(u, v) * f[v];
        inner += pi[u] * f[u] * (f[u] - pf);
      }
      REQUIRE(dirichlet_form(net, f, mode) == Catch::Approx(inner).margin(1e-10));
    }
  }
}

TEST_CASE("explicit reversible chains", "[spectral][chain]") {
  ReversibleChain ch;
  ch.p = Eigen::MatrixXd(2, 2);
  ch.p << 0.7, 0.3, 0.6, 0.4;
  ch.pi = Eigen::VectorXd(2);
  ch.pi << 2.0 / 3.0, 1.0 / 3.0;
  ch.validate();
  const auto ev = ch.eigenvalues();
  REQUIRE(ev[0] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(ev[1] == Catch::Approx(0.1).margin(1e-12));
  REQUIRE(ch.gap() == Catch::Approx(0.9).margin(1e-12));

  ReversibleChain bad = ch;
  bad.pi << 0.7, 0.3;  // wrong measure for these kernels
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
  ReversibleChain rows = ch;
  rows.p(0, 0) = 0.9;
  REQUIRE_THROWS_AS(rows.validate(), std::invalid_argument);
  ReversibleChain neg = ch;
  neg.pi(1) = 0.0;
  REQUIRE_THROWS_AS(neg.validate(), std::invalid_argument);
}

TEST_CASE("projection and restriction chains", "[spectral][projection]") {
  const Network k4 = Network::from_graph(complete_graph(4));
  const Partition halves = Partition::from_blocks(4, {VertexSet::of(4, {0, 1}), VertexSet::of(4, {2, 3})});

  const ReversibleChain bar = projection_chain(k4, halves);
  REQUIRE(bar.n() == 2);
  REQUIRE(bar.p(0, 1) == Catch::Approx(2.0 / 3.0).margin(1e-12));
  REQUIRE(bar.p(1, 0) == Catch::Approx(2.0 / 3.0).margin(1e-12));
  REQUIRE(bar.p(0, 0) == Catch::Approx(1.0 / 3.0).margin(1e-12));
  REQUIRE(bar.pi(0) == Catch::Approx(0.5).margin(1e-12));

  const ReversibleChain res = restriction_chain(k4, halves, 0);
  REQUIRE(res.n() == 2);
  REQUIRE(res.p(0, 1) == Catch::Approx(1.0 / 3.0).margin(1e-12));
  REQUIRE(res.p(0, 0) == Catch::Approx(2.0 / 3.0).margin(1e-12));
  REQUIRE(res.p.row(0).sum() == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(res.gap() == Catch::Approx(2.0 / 3.0).margin(1e-10));

  RngStream rng(46);
  const Network net = random_weighted(9, 0.6, rng);

  // the singleton partition projects onto the chain itself
  std::vector<int> ids(9);
  for (int v = 0; v < 9; ++v) ids[v] = v;
  const ReversibleChain self = projection_chain(net, Partition::from_block_of(ids));
  const Eigen::MatrixXd p = kernel_matrix(net, WalkMode::simple);
  REQUIRE((self.p - p).cwiseAbs().maxCoeff() <= 1e-12);

  // the one-block partition projects onto a point
  const ReversibleChain point = projection_chain(net, Partition::trivial(9));
  REQUIRE(point.n() == 1);
  REQUIRE(point.p(0, 0) == Catch::Approx(1.0).margin(1e-12));

  // restriction rows always sum to one; chains stay reversible
  const Partition part = random_partition(9, 3, rng);
  for (int i = 0; i < part.k; ++i) {
    const ReversibleChain r = restriction_chain(net, part, i);
    for (int a = 0; a < r.n(); ++a) REQUIRE(r.p.row(a).sum() == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("chain decomposition lower bound never beats the true gap", "[spectral][jsvt]") {
  RngStream rng(47);
  for (int it = 0; it < 50; ++it) {
    const int n = 6 + static_cast<int>(rng.below(59));
    const Network net = Network::from_graph(random_connected(n, 0.4 + 0.5 * rng.uniform(), rng));
    const Partition part = random_partition(n, 1 + static_cast<int>(rng.below(4)), rng);
    const double bound = jsvt_lower_bound(net, part);
    REQUIRE(bound >= 0.0);
    REQUIRE(bound <= spectrum(net).gap + 1e-8);
  }
  const Network k6 = Network::from_graph(complete_graph(6));
  REQUIRE(jsvt_lower_bound(k6, Partition::trivial(6)) == spectrum(k6).gap);
}

TEST_CASE("lazy vector chains", "[spectral][lazyvector]") {
  RngStream rng(48);
  for (int it = 0; it < 50; ++it) {
    const Network net = random_weighted(4 + static_cast<int>(rng.below(10)), 0.6, rng);
    const double gap_p = spectrum(net).gap;
    const double alpha = 0.1 + 0.8 * rng.uniform();
    std::vector<double> p(net.n());
    for (double& x : p) x = alpha * rng.uniform() * 0.999;
    const double gap_q = spectrum(lazy_vector_chain(net, p)).gap;
    REQUIRE(gap_q >= lazy_vector_gap_bound(gap_p, alpha) - 1e-9);
    REQUIRE(gap_q <= gap_p + 1e-10);
  }

  const Network k5 = Network::from_graph(complete_graph(5));
  const double gap5 = spectrum(k5).gap;
  REQUIRE(spectrum(lazy_vector_chain(k5, std::vector<double>(5, 0.0))).gap ==
          Catch::Approx(gap5).margin(1e-12));
  // a uniform holding vector scales every nontrivial eigenvalue exactly
  for (double a : {0.25, 0.5, 0.75}) {
    const double got = spectrum(lazy_vector_chain(k5, std::vector<double>(5, a))).gap;
    REQUIRE(got == Catch::Approx(lazy_vector_gap_bound(gap5, a)).margin(1e-9));
  }
  REQUIRE_THROWS_AS(lazy_vector_chain(k5, std::vector<double>(5, 1.0)), std::invalid_argument);
  REQUIRE_THROWS_AS(lazy_vector_chain(k5, std::vector<double>(4, 0.1)), std::invalid_argument);
  REQUIRE_THROWS_AS(lazy_vector_gap_bound(0.5, 1.0), std::invalid_argument);

  // pushing weight onto a self-loop can only slow the chain down
  RngStream rng2(49);
  for (int it = 0; it < 30; ++it) {
    const Network net = random_weighted(4 + static_cast<int>(rng2.below(9)), 0.7, rng2);
    const int v = static_cast<int>(rng2.below(net.n()));
    auto es = net.weighted_edges();
    es.emplace_back(v, v, 0.5 + 2.0 * rng2.uniform());
    const Network slowed = Network::from_weighted_edges(net.n(), es);
    REQUIRE(spectrum(slowed).gap <= spectrum(net).gap + 1e-10);
  }
}

TEST_CASE("canonical path bound", "[spectral][paths]") {
  REQUIRE(path_method_bound(complete_graph(2)) == Catch::Approx(2.0).margin(1e-12));

  RngStream rng(50);
  for (int it = 0; it < 50; ++it) {
    const int n = 3 + static_cast<int>(rng.below(30));
    const Network net = Network::from_graph(random_connected(n, 0.3 + 0.6 * rng.uniform(), rng));
    const double bound = path_method_bound(net);
    REQUIRE(bound > 0.0);
    REQUIRE(bound <= spectrum(net).gap + 1e-8);
  }

  // explicit paths are validated edge by edge
  const Network p3 = Network::from_graph(path_graph(3));
  std::vector<std::vector<std::vector<int>>> paths(3, std::vector<std::vector<int>>(3));
  for (int x = 0; x < 3; ++x) paths[x][x] = {x};
  paths[0][1] = {0, 1};
  paths[1][0] = {1, 0};
  paths[1][2] = {1, 2};
  paths[2][1] = {2, 1};
  paths[0][2] = {0, 2};  // not an edge of the path graph
  paths[2][0] = {2, 0};
  REQUIRE_THROWS_AS(path_method_bound(p3, &paths), std::invalid_argument);
  paths[0][2] = {0, 1, 2};
  paths[2][0] = {2, 1, 0};
  const double ok = path_method_bound(p3, &paths);
  REQUIRE(ok > 0.0);
  REQUIRE(ok <= spectrum(p3).gap + 1e-12);
  paths[0][2] = {0, 1};  // endpoint mismatch
  REQUIRE_THROWS_AS(path_method_bound(p3, &paths), std::invalid_argument);
}

TEST_CASE("partitioned gap bound checks its hypotheses", "[spectral][decomposition]") {
  const Graph k6 = complete_graph(6);
  REQUIRE(decomposition_gap_bound(k6, Partition::trivial(6), 0.5, 1.0, 1.0) == 0.5);

  const Graph k8 = complete_graph(8);
  const Partition halves =
      Partition::from_blocks(8, {VertexSet::of(8, {0, 1, 2, 3}), VertexSet::of(8, {4, 5, 6, 7})});
  // block gap 4/3, in-block degree 3, cross cut 16
  const double b1 = decomposition_gap_bound(k8, halves, 1.0, 3.0, 15.5);
  const double b2 = decomposition_gap_bound(k8, halves, 0.5, 3.0, 15.5);
  const double b3 = decomposition_gap_bound(k8, halves, 0.5, 2.0, 15.5);
  const double b4 = decomposition_gap_bound(k8, halves, 0.5, 2.0, 10.0);
  REQUIRE(b1 >= b2);
  REQUIRE(b2 >= b3);
  REQUIRE(b3 >= b4);
  REQUIRE(b4 > 0.0);
  REQUIRE(b1 <= spectrum(k8).gap + 1e-9);

  REQUIRE_THROWS_AS(decomposition_gap_bound(k8, halves, 1.4, 3.0, 15.5), HypothesisViolation);
  REQUIRE_THROWS_AS(decomposition_gap_bound(k8, halves, 1.0, 3.5, 15.5), HypothesisViolation);
  REQUIRE_THROWS_AS(decomposition_gap_bound(k8, halves, 1.0, 3.0, 20.0), HypothesisViolation);
  REQUIRE_THROWS_AS(decomposition_gap_bound(k8, halves, -1.0, 3.0, 1.0), std::invalid_argument);

  // derived parameters always produce a valid lower bound
  RngStream rng(51);
  int checked = 0;
  while (checked < 30) {
    const int n = 8 + static_cast<int>(rng.below(17));
    const Graph g = random_connected(n, 0.5 + 0.4 * rng.uniform(), rng);
    const Partition part = random_partition(n, 2 + static_cast<int>(rng.below(2)), rng);
    const auto params = decomposition_bound_params(g, part);
    if (!params) continue;
    ++checked;
    const double bound = decomposition_gap_bound(g, part, params->a, params->b, params->c);
    REQUIRE(bound > 0.0);
    REQUIRE(bound <= spectrum(g).gap + 1e-8);
  }
}
