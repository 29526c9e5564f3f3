#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crawlcount/error.hpp"

namespace crawlcount {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Immutable simple undirected graph in CSR form. Vertex ids are 0..n-1 and
// their numeric order is the fixed total order used for every tie-break.
class Graph {
 public:
  Graph() = default;

  // Self-loops and duplicate edges are dropped. Every endpoint must be < n.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw Error("edge endpoint out of range");
      if (u == v) continue;
      canon.push_back(make_edge(u, v));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : canon) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : canon) {
      g.targets_[fill[u]++] = v;
      g.targets_[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v)
      std::sort(g.targets_.begin() + g.offsets_[v], g.targets_.begin() + g.offsets_[v + 1]);
    g.edge_count_ = canon.size();
    return g;
  }

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return edge_count_; }

  // Direct adjacency access. Estimators must go through NeighborhoodOracle.
  std::span<const Vertex> adjacency(Vertex v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(Vertex u, Vertex v) const {
    auto adj = adjacency(u);
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < vertex_count(); ++u)
      for (Vertex v : adjacency(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
  std::size_t edge_count_ = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class Int>
std::optional<Int> parse_int(std::string_view tok) {
  Int value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

// Recognizes the "# n=<int>" header; returns nullopt for ordinary comments.
inline std::optional<std::size_t> parse_vertex_header(std::string_view comment) {
  comment.remove_prefix(1);
  comment = trim(comment);
  if (!comment.starts_with("n=")) return std::nullopt;
  return parse_int<std::size_t>(trim(comment.substr(2)));
}

}  // namespace detail

// Edge-list text: optional "# n=<int>" header, then "u v" per line. Other
// '#'-lines are comments. LF or CRLF.
inline Graph load_edge_list(std::istream& in) {
  std::optional<std::size_t> declared_n;
  std::vector<Edge> edges;
  std::size_t max_id = 0;
  bool seen_data = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto text = detail::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (!seen_data && !declared_n) {
        if (auto n = detail::parse_vertex_header(text)) declared_n = *n;
      }
      continue;
    }
    seen_data = true;
    auto toks = detail::split_ws(text);
    if (toks.size() != 2) throw ParseError(lineno, "expected two vertex ids");
    auto u = detail::parse_int<Vertex>(toks[0]);
    auto v = detail::parse_int<Vertex>(toks[1]);
    if (!u || !v) throw ParseError(lineno, "non-integer vertex id");
    if (declared_n && (*u >= *declared_n || *v >= *declared_n))
      throw ParseError(lineno, "vertex id exceeds declared n");
    max_id = std::max({max_id, std::size_t{*u}, std::size_t{*v}});
    edges.emplace_back(*u, *v);
  }
  if (edges.empty()) throw Error("empty graph: no edges");
  std::size_t n = declared_n ? *declared_n : max_id + 1;
  Graph g = Graph::from_edges(n, edges);
  if (g.edge_count() == 0) throw Error("empty graph: only self-loops");
  return g;
}

// Cost accounting for one estimation run.
class QueryLedger {
 public:
  QueryLedger() = default;
  explicit QueryLedger(std::size_t n) : queried_(n, 0) {}

  std::size_t oracle_calls() const { return oracle_calls_; }
  std::size_t queried_vertex_count() const { return queried_count_; }
  std::size_t observed_edge_count() const { return observed_edges_; }
  bool was_queried(Vertex v) const { return v < queried_.size() && queried_[v]; }

  void record(const Graph& g, Vertex v) {
    ++oracle_calls_;
    if (queried_[v]) return;
    queried_[v] = 1;
    ++queried_count_;
    // An edge becomes observed the first time either endpoint is queried.
    for (Vertex u : g.adjacency(v))
      if (!queried_[u]) ++observed_edges_;
  }

 private:
  std::vector<char> queried_;
  std::size_t oracle_calls_ = 0;
  std::size_t queried_count_ = 0;
  std::size_t observed_edges_ = 0;
};

inline double edges_observed_fraction(const QueryLedger& ledger, const Graph& g) {
  if (g.edge_count() == 0) return 0.0;
  return static_cast<double>(ledger.observed_edge_count()) / static_cast<double>(g.edge_count());
}

// The only access path estimators use: every call is metered in the ledger.
// A degree query costs the same as a neighborhood query.
class NeighborhoodOracle {
 public:
  NeighborhoodOracle(const Graph& g, QueryLedger& ledger) : graph_(&g), ledger_(&ledger) {}

  std::span<const Vertex> neighbors(Vertex v) const {
    check(v);
    ledger_->record(*graph_, v);
    return graph_->adjacency(v);
  }

  std::size_t degree(Vertex v) const { return neighbors(v).size(); }

  std::size_t vertex_count() const { return graph_->vertex_count(); }
  const QueryLedger& ledger() const { return *ledger_; }

 private:
  void check(Vertex v) const {
    if (v >= graph_->vertex_count()) throw Error("vertex " + std::to_string(v) + " out of range");
  }

  const Graph* graph_;
  QueryLedger* ledger_;
};

inline std::span<const Vertex> neighbors(const Graph& g, QueryLedger& ledger, Vertex v) {
  return NeighborhoodOracle(g, ledger).neighbors(v);
}

inline std::size_t degree(const Graph& g, QueryLedger& ledger, Vertex v) {
  return NeighborhoodOracle(g, ledger).degree(v);
}

}  // namespace crawlcount
