#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "crawlcount/error.hpp"
#include "crawlcount/graph.hpp"

namespace crawlcount {

using Rng = std::mt19937_64;

// ceil(10 * log2(n)): the walk is assumed to mix in O(log n) steps.
inline std::size_t default_burn_in(std::size_t n) {
  if (n <= 1) return 0;
  return static_cast<std::size_t>(std::ceil(10.0 * std::log2(static_cast<double>(n))));
}

struct WalkConfig {
  std::uint64_t seed = 1;
  std::optional<std::size_t> burn_in;  // defaults to default_burn_in(n)
  std::size_t length = 1;              // edges collected after burn-in
  std::optional<Vertex> start;         // uniform over vertices when unset
  bool lazy = false;                   // hold position w.p. 1/2 (periodic graphs)

  std::size_t burn_in_for(std::size_t n) const { return burn_in.value_or(default_burn_in(n)); }
};

// One simple random walk. Each step queries the current vertex, draws a
// uniform neighbor u, emits the edge {v, u}, and moves to u (or, in lazy
// mode, moves with probability 1/2). Consecutive emitted edges share a vertex.
class Walker {
 public:
  Walker(const NeighborhoodOracle& oracle, Rng& rng, bool lazy) : oracle_(&oracle), rng_(&rng), lazy_(lazy) {}

  void start_at(Vertex v) {
    if (v >= oracle_->vertex_count()) throw Error("start vertex out of range");
    current_ = v;
  }

  // Uniform start; vertices with no neighbors are redrawn. The probe query of
  // the accepted start vertex is reused by the first step.
  void start_uniform() {
    if (oracle_->vertex_count() == 0) throw Error("random walk on an empty graph");
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(oracle_->vertex_count() - 1));
    for (;;) {
      Vertex v = pick(*rng_);
      auto adj = oracle_->neighbors(v);
      if (!adj.empty()) {
        current_ = v;
        cached_ = adj;
        return;
      }
    }
  }

  Edge step() {
    auto adj = cached_ ? *cached_ : oracle_->neighbors(current_);
    cached_.reset();
    if (adj.empty()) throw Error("random walk reached an isolated vertex");
    std::uniform_int_distribution<std::size_t> pick(0, adj.size() - 1);
    Vertex next = adj[pick(*rng_)];
    Edge e = make_edge(current_, next);
    if (!lazy_ || std::bernoulli_distribution(0.5)(*rng_)) current_ = next;
    return e;
  }

  Vertex position() const { return current_; }

 private:
  const NeighborhoodOracle* oracle_;
  Rng* rng_;
  bool lazy_;
  Vertex current_ = 0;
  std::optional<std::span<const Vertex>> cached_;
};

namespace detail {

inline void ensure_walkable(const Graph& g) {
  if (g.edge_count() == 0) throw Error("random walk needs at least one edge; every vertex is isolated");
}

}  // namespace detail

// burn_in + length steps; returns the last `length` edges in walk order.
inline std::vector<Edge> simple_random_walk(const Graph& g, QueryLedger& ledger, const WalkConfig& cfg, Rng& rng) {
  detail::ensure_walkable(g);
  if (cfg.length < 1) throw Error("walk length must be at least 1");
  NeighborhoodOracle oracle(g, ledger);
  Walker walker(oracle, rng, cfg.lazy);
  if (cfg.start)
    walker.start_at(*cfg.start);
  else
    walker.start_uniform();
  const std::size_t burn = cfg.burn_in_for(g.vertex_count());
  for (std::size_t s = 0; s < burn; ++s) walker.step();
  std::vector<Edge> out;
  out.reserve(cfg.length);
  for (std::size_t s = 0; s < cfg.length; ++s) out.push_back(walker.step());
  return out;
}

inline std::vector<Edge> simple_random_walk(const Graph& g, QueryLedger& ledger, const WalkConfig& cfg) {
  Rng rng(cfg.seed);
  return simple_random_walk(g, ledger, cfg, rng);
}

struct EdgeCountConfig {
  std::size_t samples = 1000;  // s
  std::size_t gap = 10;        // walk steps between consecutive samples
  std::uint64_t seed = 1;
  std::optional<std::size_t> burn_in;
  std::size_t max_retries = 6;  // each retry doubles s
  bool lazy = false;
};

struct EdgeCountEstimate {
  double m_hat = 0.0;
  std::size_t samples = 0;     // s used by the successful round
  std::uint64_t collisions = 0;  // X
  std::size_t retries = 0;
};

// Birthday-paradox estimator: among s near-uniform edge samples the expected
// number of colliding index pairs is C(s,2)/m, so m_hat = C(s,2)/X.
inline EdgeCountEstimate estimate_edge_count(const Graph& g, QueryLedger& ledger, const EdgeCountConfig& cfg, Rng& rng) {
  if (cfg.samples < 2) throw Error("edge-count estimation needs at least 2 samples");
  if (cfg.gap < 1) throw Error("sample spacing must be at least 1");
  detail::ensure_walkable(g);
  NeighborhoodOracle oracle(g, ledger);
  Walker walker(oracle, rng, cfg.lazy);
  walker.start_uniform();
  const std::size_t burn = cfg.burn_in.value_or(default_burn_in(g.vertex_count()));
  for (std::size_t s = 0; s < burn; ++s) walker.step();

  std::size_t s = cfg.samples;
  for (std::size_t attempt = 0; attempt <= cfg.max_retries; ++attempt, s *= 2) {
    std::unordered_map<std::uint64_t, std::uint64_t> seen;
    seen.reserve(s);
    for (std::size_t j = 0; j < s; ++j) {
      Edge e{};
      for (std::size_t t = 0; t < cfg.gap; ++t) e = walker.step();
      ++seen[(std::uint64_t{e.first} << 32) | e.second];
    }
    std::uint64_t x = 0;
    for (const auto& [key, cnt] : seen) x += cnt * (cnt - 1) / 2;
    if (x > 0) {
      double pairs = static_cast<double>(s) * static_cast<double>(s - 1) / 2.0;
      return {pairs / static_cast<double>(x), s, x, attempt};
    }
  }
  throw Error("insufficient samples: no edge collisions after retries");
}

inline EdgeCountEstimate estimate_edge_count(const Graph& g, QueryLedger& ledger, const EdgeCountConfig& cfg) {
  Rng rng(cfg.seed);
  return estimate_edge_count(g, ledger, cfg, rng);
}

}  // namespace crawlcount
