#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "crawlcount/graph.hpp"

namespace crawlcount::testing {

inline Graph make_graph(std::size_t n, std::vector<Edge> edges) { return Graph::from_edges(n, edges); }

inline Graph triangle() { return make_graph(3, {{0, 1}, {1, 2}, {2, 0}}); }

// Triangles {0,1,2} and {2,3,4} sharing vertex 2.
inline Graph bowtie() { return make_graph(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}}); }

// 4-cycle 0-1-2-3 with chord 0-2.
inline Graph diamond() { return make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}); }

inline Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) e.emplace_back(a, b);
  return make_graph(n, e);
}

inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return make_graph(leaves + 1, e);
}

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return make_graph(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v < n; ++v) e.emplace_back(v, static_cast<Vertex>((v + 1) % n));
  return make_graph(n, e);
}

// Complete binary tree on n vertices.
inline Graph binary_tree(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 1; v < n; ++v) e.emplace_back((v - 1) / 2, v);
  return make_graph(n, e);
}

inline Graph petersen() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(i + 5, (i + 2) % 5 + 5);
  }
  return make_graph(10, e);
}

inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      if (coin(rng)) e.emplace_back(a, b);
  return make_graph(n, e);
}

// Barabasi-Albert: seed clique on attach+1 vertices, then each new vertex
// links to `attach` distinct vertices chosen proportionally to degree.
inline Graph preferential_attachment(std::size_t n, std::size_t attach, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> e;
  std::vector<Vertex> endpoints;
  for (Vertex a = 0; a <= attach; ++a)
    for (Vertex b = a + 1; b <= attach; ++b) {
      e.emplace_back(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  for (Vertex v = static_cast<Vertex>(attach + 1); v < n; ++v) {
    std::vector<Vertex> targets;
    while (targets.size() < attach) {
      std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
      Vertex t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (Vertex t : targets) {
      e.emplace_back(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return make_graph(n, e);
}

inline bool is_connected(const Graph& g) {
  if (g.vertex_count() == 0) return true;
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex u : g.adjacency(v))
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
  }
  return count == g.vertex_count();
}

struct NamedGraph {
  std::string name;
  Graph graph;
};

// Small graphs every exhaustive property runs over.
inline std::vector<NamedGraph> corpus() {
  std::vector<NamedGraph> out{
      {"triangle", triangle()}, {"bowtie", bowtie()},   {"diamond", diamond()},     {"K4", complete(4)},
      {"K5", complete(5)},      {"K6", complete(6)},    {"star4", star(4)},         {"path6", path(6)},
      {"C5", cycle(5)},         {"tree15", binary_tree(15)}, {"petersen", petersen()},
  };
  for (std::uint64_t s = 0; s < 6; ++s)
    out.push_back({"er16_" + std::to_string(s), erdos_renyi(16, 0.35 + 0.05 * static_cast<double>(s), 100 + s)});
  out.push_back({"er30", erdos_renyi(30, 0.3, 7)});
  out.push_back({"pa40", preferential_attachment(40, 4, 11)});
  return out;
}

}  // namespace crawlcount::testing
