#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "ustlab.hpp"

using namespace ustlab;

TEST_CASE("rng streams are deterministic and derivable", "[core][rng]") {
  RngStream a(42), b(42);
  for (int i = 0; i < 16; ++i) REQUIRE(a.next_u64() == b.next_u64());

  RngStream d1 = RngStream::derive(42, 7);
  RngStream d2 = RngStream::derive(42, 7);
  RngStream d3 = RngStream::derive(42, 8);
  REQUIRE(d1.seed() == d2.seed());
  REQUIRE(d1.next_u64() == d2.next_u64());
  REQUIRE(d1.seed() != d3.seed());

  RngStream u(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    REQUIRE(u.below(10) < 10);
  }

  // rough frequency check on bernoulli(0.3): 4 sigma at 1e5 draws
  RngStream c(11);
  int heads = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) heads += c.bernoulli(0.3);
  const double p = static_cast<double>(heads) / n;
  REQUIRE(std::abs(p - 0.3) < 4.0 * std::sqrt(0.3 * 0.7 / n));
}

TEST_CASE("vertex sets track membership and cardinality", "[core][vertexset]") {
  VertexSet s(100);
  REQUIRE(s.empty());
  s.add(3);
  s.add(64);
  s.add(99);
  s.add(64);  // repeat is a no-op
  REQUIRE(s.size() == 3);
  REQUIRE(s.contains(64));
  REQUIRE_FALSE(s.contains(4));
  REQUIRE(s.members() == std::vector<int>{3, 64, 99});

  s.remove(64);
  REQUIRE(s.size() == 2);
  REQUIRE_FALSE(s.contains(64));

  const VertexSet c = s.complement();
  REQUIRE(c.size() == 98);
  REQUIRE_FALSE(c.intersects(s));
  REQUIRE(c.complement() == s);

  const VertexSet f = VertexSet::full(7);
  REQUIRE(f.size() == 7);
  REQUIRE(VertexSet::of(7, {1, 5}).intersects(f));
  REQUIRE(static_cast<int>(f.members().size()) == f.size());
}

TEST_CASE("graph construction validates simplicity", "[core][graph]") {
  const Graph k3 = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  REQUIRE(k3.n() == 3);
  REQUIRE(k3.m() == 3);
  REQUIRE(k3.has_edge(0, 2));
  REQUIRE_FALSE(k3.has_edge(0, 0));

  REQUIRE_THROWS_AS(Graph::from_edges(2, {{0, 0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(Graph::from_edges(2, {{0, 1}, {1, 0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(Graph::from_edges(2, {{0, 2}}), std::invalid_argument);
}

TEST_CASE("degree and boundary queries are exact", "[core][graph]") {
  const Graph k4 = complete_graph(4);
  // handshake
  std::uint64_t degsum = 0;
  for (int v = 0; v < 4; ++v) degsum += k4.degree(v);
  REQUIRE(degsum == 2 * k4.m());

  const VertexSet single = VertexSet::of(4, {2});
  REQUIRE(k4.edge_boundary(single) == 3);
  REQUIRE(k4.volume(single) == 3);

  const VertexSet pair = VertexSet::of(4, {0, 1});
  REQUIRE(k4.edge_boundary(pair) == 4);
  REQUIRE(k4.volume(pair) == 6);
  REQUIRE(k4.deg_into(0, pair) == 1);
  REQUIRE(k4.deg_into(2, pair) == 2);

  // boundary equals the cut against the complement, and is side-symmetric
  REQUIRE(k4.cut_count(pair, pair.complement()) == k4.edge_boundary(pair));
  REQUIRE(k4.edge_boundary(pair) == k4.edge_boundary(pair.complement()));
  REQUIRE_THROWS_AS(k4.cut_count(pair, VertexSet::of(4, {1, 2})), std::invalid_argument);
  REQUIRE(k4.cut_count(pair, single) == 2);  // disjoint but not complementary

  // two disjoint triangles: zero cut across components
  const Graph two = Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  REQUIRE(two.cut_count(VertexSet::of(6, {0, 1, 2}), VertexSet::of(6, {3, 4, 5})) == 0);
  REQUIRE_FALSE(two.is_connected());
  REQUIRE(complete_graph(4).is_connected());
  REQUIRE(two.min_degree() == 2);
}

TEST_CASE("boundary identities hold on random subsets", "[core][graph]") {
  RngStream rng(5);
  const Graph g = dense_gnp(24, 0.4, rng);
  for (int it = 0; it < 30; ++it) {
    VertexSet s(g.n());
    for (int v = 0; v < g.n(); ++v)
      if (rng.bernoulli(0.5)) s.add(v);
    if (s.empty() || s.size() == g.n()) continue;
    REQUIRE(g.edge_boundary(s) == g.cut_count(s, s.complement()));
    REQUIRE(g.edge_boundary(s) == g.edge_boundary(s.complement()));
    std::uint64_t vol = 0;
    for (int v : s.members()) vol += g.degree(v);
    REQUIRE(g.volume(s) == vol);
  }
}

TEST_CASE("induced subgraphs relabel and restrict", "[core][graph]") {
  const Graph k4 = complete_graph(4);
  const auto tri = k4.induced_subgraph(VertexSet::of(4, {0, 1, 2}));
  REQUIRE(tri.graph.n() == 3);
  REQUIRE(tri.graph.m() == 3);
  REQUIRE(tri.to_original == std::vector<int>{0, 1, 2});

  const Graph p3 = path_graph(3);
  const auto ends = p3.induced_subgraph(VertexSet::of(3, {0, 2}));
  REQUIRE(ends.graph.n() == 2);
  REQUIRE(ends.graph.m() == 0);

  const Graph k6 = complete_graph(6);
  const auto four = k6.induced_subgraph(VertexSet::of(6, {1, 2, 4, 5}));
  REQUIRE(four.graph.n() == 4);
  REQUIRE(four.graph.m() == 6);
  REQUIRE(four.to_original == std::vector<int>{1, 2, 4, 5});
}

TEST_CASE("networks cache strengths and sample by weight", "[core][network]") {
  const Network net = Network::from_weighted_edges(4, {{0, 1, 1.0}, {0, 2, 2.0}, {0, 3, 3.0}});
  REQUIRE(net.strength(0) == Catch::Approx(6.0));
  REQUIRE(net.strength(2) == Catch::Approx(2.0));
  REQUIRE(net.total_strength() == Catch::Approx(12.0));  // twice the edge weight total
  REQUIRE(net.weight(0, 2) == Catch::Approx(2.0));
  REQUIRE(net.weight(2, 0) == Catch::Approx(2.0));
  REQUIRE(net.weight(1, 2) == 0.0);

  REQUIRE_THROWS_AS(Network::from_weighted_edges(2, {{0, 1, 0.0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(Network::from_weighted_edges(2, {{0, 1, 1.0}, {0, 1, 2.0}}),
                    std::invalid_argument);

  RngStream rng(3);
  const int draws = 60000;
  std::vector<int> count(4, 0);
  for (int i = 0; i < draws; ++i) ++count[net.random_neighbor(0, rng)];
  for (int v = 1; v < 4; ++v) {
    const double expect = net.weight(0, v) / net.strength(0);
    const double got = static_cast<double>(count[v]) / draws;
    REQUIRE(std::abs(got - expect) < 4.0 * std::sqrt(expect * (1 - expect) / draws));
  }
}

TEST_CASE("contraction merges crossing weights and drops inside edges", "[core][contract]") {
  const Graph k4 = complete_graph(4);
  const ContractionMap cm = contract(k4, {VertexSet::of(4, {0, 1})});
  // block {0,1} takes id 0; vertices 2, 3 follow as 1, 2
  REQUIRE(cm.contracted.n() == 3);
  REQUIRE(cm.block_of == std::vector<int>{0, 0, 1, 2});
  REQUIRE(cm.contracted.weight(0, 1) == Catch::Approx(2.0));
  REQUIRE(cm.contracted.weight(0, 2) == Catch::Approx(2.0));
  REQUIRE(cm.contracted.weight(1, 2) == Catch::Approx(1.0));
  REQUIRE(cm.contracted.weight(0, 0) == 0.0);  // intra-block edge vanished

  // whole vertex set: a single point with no edges
  const ContractionMap all = contract(k4, {VertexSet::full(4)});
  REQUIRE(all.contracted.n() == 1);
  REQUIRE(all.contracted.edge_count() == 0);

  // singleton block: the network is unchanged up to the identity relabel
  const ContractionMap one = contract(k4, {VertexSet::of(4, {0})});
  REQUIRE(one.contracted.n() == 4);
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v)
      REQUIRE(one.contracted.weight(u, v) ==
              Catch::Approx(Network::from_graph(k4).weight(u, v)));

  REQUIRE_THROWS_AS(contract(k4, {VertexSet::of(4, {0, 1}), VertexSet::of(4, {1, 2})}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(contract(k4, {VertexSet(4)}), std::invalid_argument);
}

TEST_CASE("contracting twice agrees with contracting merged blocks", "[core][contract]") {
  RngStream rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = dense_gnp(8, 0.6, rng);
    const Network net = Network::from_graph(g);
    const VertexSet a = VertexSet::of(8, {0, 1, 2});
    const VertexSet b = VertexSet::of(8, {5, 6});

    const ContractionMap oneshot = contract(net, {a, b});
    const ContractionMap step1 = contract(net, {a});
    VertexSet b_img(step1.contracted.n());
    for (int v : b.members()) b_img.add(step1.block_of[v]);
    const ContractionMap step2 = contract(step1.contracted, {b_img});

    // compare quotient weights through the composed vertex maps
    for (int u = 0; u < 8; ++u)
      for (int v = 0; v < 8; ++v) {
        const double w1 = oneshot.contracted.weight(oneshot.block_of[u], oneshot.block_of[v]);
        const double w2 = step2.contracted.weight(step2.block_of[step1.block_of[u]],
                             step2.block_of[step1.block_of[v]]);
        REQUIRE(w1 == Catch::Approx(w2).margin(1e-12));
      }
  }
}

TEST_CASE("preimage edges invert the contraction", "[core][contract]") {
  const Graph k4 = complete_graph(4);
  const Network net = Network::from_graph(k4);
  const ContractionMap cm = contract(net, {VertexSet::of(4, {0, 1})});
  const auto pre = cm.preimage_edges(net, 0, 1);  // contracted edge to original vertex 2
  REQUIRE(pre.size() == 2);
  std::set<std::pair<int, int>> got;
  for (auto [u, v, w] : pre) {
    got.insert({u, v});
    REQUIRE(w == Catch::Approx(1.0));
  }
  REQUIRE(got == std::set<std::pair<int, int>>{{0, 2}, {1, 2}});

  RngStream rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto [u, v] = cm.lift_edge(net, 0, 1, rng);
    REQUIRE((u == 0 || u == 1));
    REQUIRE(v == 2);
  }
}

TEST_CASE("rho augmentation fixes the per-vertex jump probability", "[core][rho]") {
  RngStream rng(9);
  const Graph g = dense_gnp(36, 0.7, rng);
  const double theta = 0.4, eps = 0.8;
  const Network net = augment_rho(g, theta, eps);
  const int n = g.n();
  REQUIRE(net.n() == n + 1);
  const double target = theta * std::pow(eps, 4) / std::sqrt(static_cast<double>(n));
  double rho_total = 0.0;
  for (int v = 0; v < n; ++v) {
    const double w = net.weight(v, n);
    REQUIRE(w / net.strength(v) == Catch::Approx(target).epsilon(0).margin(1e-12));
    rho_total += w;
  }
  const double a = theta * std::pow(eps, 4);
  REQUIRE(rho_total ==
          Catch::Approx(a / (std::sqrt(static_cast<double>(n)) - a) * 2.0 * g.m()).margin(1e-9));

  // K4 with theta*eps^4 = 1: weight 3 per vertex, jump probability 1/2
  const Network k4rho = augment_rho(complete_graph(4), 1.0, 1.0);
  REQUIRE(k4rho.weight(0, 4) == Catch::Approx(3.0));
  REQUIRE(k4rho.weight(0, 4) / k4rho.strength(0) == Catch::Approx(0.5));

  // vanishing theta: weights vanish
  const Network tiny = augment_rho(complete_graph(4), 1e-12, 1.0);
  REQUIRE(tiny.weight(0, 4) < 1e-10);

  REQUIRE_THROWS_AS(augment_rho(complete_graph(4), 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("edge list parsing reports line numbers", "[core][io]") {
  const Graph k3 = load_graph("3 3\n0 1\n1 2\n0 2\n");
  REQUIRE(k3.n() == 3);
  REQUIRE(k3.m() == 3);
  REQUIRE(load_graph("2 1\n0 1\n").m() == 1);

  REQUIRE_THROWS_AS(load_graph("2 1\n0 0\n"), std::invalid_argument);  // self-loop

  try {
    load_graph("not a header\n");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    REQUIRE(e.line == 1);
  }
  try {
    load_graph("3 2\n0 1\nbad edge\n");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    REQUIRE(e.line == 3);
  }
  try {
    load_graph("3 5\n0 1\n1 2\n");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    REQUIRE(std::string(e.what()).find("expected 5 edges") != std::string::npos);
  }
  REQUIRE_THROWS_AS(load_graph("2 1\n0 1 2.5\n"), std::invalid_argument);  // weighted edge
  REQUIRE_THROWS_AS(load_graph("2 1\n0 3\n"), ParseError);                 // out of range

  // comments and blank lines are skipped
  REQUIRE(load_graph("# triangle\n3 3\n\n0 1\n1 2\n0 2\n").m() == 3);
}

TEST_CASE("graph serialization round-trips", "[core][io]") {
  const Graph g = two_cliques_bridge(8);
  const std::string text = to_edge_list(g);
  const Graph back = load_graph(text);
  REQUIRE(back.n() == g.n());
  REQUIRE(back.edges() == g.edges());

  const Graph viaj = load_graph(graph_to_json(g).dump());
  REQUIRE(viaj.edges() == g.edges());

  const Network net = Network::from_weighted_edges(3, {{0, 1, 2.5}, {1, 2, 1.0}});
  const Network nback = load_network(to_edge_list(net));
  REQUIRE(nback.weight(0, 1) == Catch::Approx(2.5));
  REQUIRE(nback.weight(1, 2) == Catch::Approx(1.0));
  const Network njson = load_network(network_to_json(net).dump());
  REQUIRE(njson.weight(0, 1) == Catch::Approx(2.5));

  REQUIRE_THROWS_AS(load_graph("{\"edges\":[]}"), ParseError);  // missing n
}

TEST_CASE("partitions validate their blocks", "[core][partition]") {
  const Partition p = Partition::from_block_of({0, 0, 1, 1, 2});
  REQUIRE(p.k == 3);
  REQUIRE(p.block(1).members() == std::vector<int>{2, 3});
  REQUIRE(p.block_sizes() == std::vector<int>{2, 2, 1});
  REQUIRE(Partition::trivial(4).k == 1);

  REQUIRE_THROWS_AS(Partition::from_block_of({0, 2}), std::invalid_argument);  // block 1 empty
  REQUIRE_THROWS_AS(
      Partition::from_blocks(3, {VertexSet::of(3, {0, 1}), VertexSet::of(3, {1, 2})}),
      std::invalid_argument);
  REQUIRE_THROWS_AS(Partition::from_blocks(3, {VertexSet::of(3, {0, 1})}), std::invalid_argument);
}

TEST_CASE("block cut matrix and the quotient graph over thresholds", "[core][partition]") {
  const Graph g = two_cliques_bridge(8);
  const Partition p = Partition::from_blocks(
      8, {VertexSet::of(8, {0, 1, 2, 3}), VertexSet::of(8, {4, 5, 6, 7})});
  const auto cut = block_cut_matrix(g, p);
  REQUIRE(cut[0][1] == 1);
  REQUIRE(cut[1][0] == 1);
  REQUIRE(cut[0][0] == 6);  // internal clique edges

  REQUIRE(h_graph(g, p, 0.0).m() == 1);  // the bridge clears a zero threshold
  REQUIRE(h_graph(g, p, 1.0).m() == 0);  // but not a threshold of one
  REQUIRE(h_graph(g, p, 64.0).m() == 0);

  // a threshold below zero joins every block pair, even without crossings
  const Graph path = path_graph(6);
  const Partition q = Partition::from_block_of({0, 0, 1, 1, 2, 2});
  REQUIRE(h_graph(path, q, -1.0).m() == 3);
  REQUIRE(h_graph(path, q, 0.0).m() == 2);
}
