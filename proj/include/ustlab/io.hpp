#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "ustlab/graph.hpp"
#include "ustlab/network.hpp"

namespace ustlab {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what_)
      : std::runtime_error("parse error at line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
};

namespace detail {

// Edge-list text: first line "n m", then m lines "u v" or "u v w" (0-based).
inline std::tuple<int, std::vector<std::tuple<int, int, double>>> parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t i = line.find_first_not_of(" \t\r");
      if (i == std::string::npos || line[i] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError(lineno, "missing header line \"n m\"");
  int n = 0;
  long long m = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m) || n < 0 || m < 0) throw ParseError(lineno, "bad header, expected \"n m\"");
    std::string extra;
    if (hs >> extra) throw ParseError(lineno, "trailing tokens after header");
  }
  std::vector<std::tuple<int, int, double>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long e = 0; e < m; ++e) {
    if (!next_line()) throw ParseError(lineno, "expected " + std::to_string(m) + " edges, got " + std::to_string(e));
    std::istringstream es(line);
    int u, v;
    if (!(es >> u >> v)) throw ParseError(lineno, "bad edge, expected \"u v\" or \"u v w\"");
    double w = 1.0;
    std::string tok;
    if (es >> tok) {
      try {
        std::size_t pos = 0;
        w = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("");
      } catch (...) {
        throw ParseError(lineno, "bad weight \"" + tok + "\"");
      }
      if (es >> tok) throw ParseError(lineno, "trailing tokens after edge");
    }
    if (u < 0 || u >= n || v < 0 || v >= n) throw ParseError(lineno, "endpoint out of range");
    edges.emplace_back(u, v, w);
  }
  if (next_line()) throw ParseError(lineno, "trailing content after last edge");
  return {n, std::move(edges)};
}

inline std::tuple<int, std::vector<std::tuple<int, int, double>>> parse_json_edges(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw ParseError(1, "JSON graph needs fields \"n\" and \"edges\"");
  const int n = j.at("n").get<int>();
  std::vector<std::tuple<int, int, double>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3)
      throw ParseError(1, "each edge must be [u, v] or [u, v, w]");
    const int u = e[0].get<int>();
    const int v = e[1].get<int>();
    const double w = e.size() == 3 ? e[2].get<double>() : 1.0;
    if (u < 0 || u >= n || v < 0 || v >= n) throw ParseError(1, "endpoint out of range");
    edges.emplace_back(u, v, w);
  }
  return {n, std::move(edges)};
}

inline bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{';
  }
  return false;
}

inline std::tuple<int, std::vector<std::tuple<int, int, double>>> parse_any(const std::string& text) {
  return looks_like_json(text) ? parse_json_edges(text) : parse_edge_list(text);
}

}  // namespace detail

// Unit-weight graph from edge-list text or JSON. Rejects weighted edges.
inline Graph load_graph(const std::string& text) {
  auto [n, wedges] = detail::parse_any(text);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(wedges.size());
  for (auto [u, v, w] : wedges) {
    if (w != 1.0) throw std::invalid_argument("load_graph: weighted edge in unit-weight graph");
    edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges);
}

// Weighted network from the same formats; missing weights default to 1.
inline Network load_network(const std::string& text) {
  auto [n, wedges] = detail::parse_any(text);
  return Network::from_weighted_edges(n, wedges);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Graph load_graph_file(const std::string& path) { return load_graph(read_file(path)); }
inline Network load_network_file(const std::string& path) { return load_network(read_file(path)); }

inline std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.n() << ' ' << g.m() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

inline std::string to_edge_list(const Network& net) {
  std::ostringstream out;
  auto es = net.weighted_edges();
  out << net.n() << ' ' << es.size() << '\n';
  for (auto [u, v, w] : es) {
    out << u << ' ' << v;
    if (w != 1.0) out << ' ' << w;
    out << '\n';
  }
  return out.str();
}

inline nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.n()}, {"edges", edges}};
}

inline nlohmann::json network_to_json(const Network& net) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v, w] : net.weighted_edges()) edges.push_back({u, v, w});
  return {{"n", net.n()}, {"edges", edges}};
}

}  // namespace ustlab
