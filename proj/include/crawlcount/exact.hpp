#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "crawlcount/error.hpp"
#include "crawlcount/graph.hpp"
#include "crawlcount/pattern.hpp"
#include "crawlcount/subgraph.hpp"

// Ground truth for verification. These routines read the whole graph
// directly and are not part of the metered access model.
namespace crawlcount {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

namespace detail {

// Connected-set enumeration (ESU): every connected vertex set of the target
// size is produced exactly once, rooted at its smallest vertex.
class ConnectedSetEnumerator {
 public:
  ConnectedSetEnumerator(const Graph& g, int size, int min_degree, std::uint64_t budget)
      : g_(g), size_(size), min_degree_(min_degree), budget_(budget), blocked_(g.vertex_count(), 0) {}

  template <class Fn>
  void run(Fn&& emit) {
    for (Vertex root = 0; root < g_.vertex_count(); ++root) {
      if (!allowed(root)) continue;
      std::vector<Vertex> ext;
      for (Vertex u : g_.adjacency(root))
        if (u > root && allowed(u)) ext.push_back(u);
      sub_.assign(1, root);
      block(root, +1);
      extend(ext, root, emit);
      block(root, -1);
    }
  }

 private:
  bool allowed(Vertex v) const { return static_cast<int>(g_.degree(v)) >= min_degree_; }

  // blocked_[x] > 0 iff x is in the current set or adjacent to it.
  void block(Vertex v, int delta) {
    blocked_[v] += delta;
    for (Vertex u : g_.adjacency(v)) blocked_[u] += delta;
  }

  template <class Fn>
  void extend(std::vector<Vertex> ext, Vertex root, Fn& emit) {
    if (++work_ > budget_) throw BudgetExceeded("exact enumeration exceeded its work budget; use a smaller graph");
    if (static_cast<int>(sub_.size()) == size_) {
      emit(std::span<const Vertex>(sub_));
      return;
    }
    while (!ext.empty()) {
      Vertex w = ext.back();
      ext.pop_back();
      std::vector<Vertex> next = ext;
      for (Vertex u : g_.adjacency(w))
        if (u > root && blocked_[u] == 0 && allowed(u)) next.push_back(u);
      sub_.push_back(w);
      block(w, +1);
      extend(std::move(next), root, emit);
      block(w, -1);
      sub_.pop_back();
    }
  }

  const Graph& g_;
  int size_;
  int min_degree_;
  std::uint64_t budget_;
  std::uint64_t work_ = 0;
  std::vector<int> blocked_;
  std::vector<Vertex> sub_;
};

inline std::uint32_t induced_mask(const Graph& g, const Instance& inst) {
  std::uint32_t mask = 0;
  for (int b = 1; b < inst.size(); ++b)
    for (int a = 0; a < b; ++a)
      if (g.has_edge(inst[a], inst[b])) mask |= 1u << pair_bit(a, b);
  return mask;
}

}  // namespace detail

// All induced copies of seg_i, sorted.
inline std::vector<Instance> enumerate_instances(const Graph& g, const SegmentedMotif& motif, int level,
                                                 std::uint64_t budget = kDefaultEnumerationBudget) {
  if (level < 2 || level > motif.size()) throw Error("level out of range");
  SmallGraph seg = motif.segmentation().level(motif.pattern(), level);
  int min_degree = level;
  for (int v = 0; v < level; ++v) min_degree = std::min(min_degree, seg.degree(v));

  std::vector<Instance> out;
  detail::ConnectedSetEnumerator en(g, level, min_degree, budget);
  en.run([&](std::span<const Vertex> vs) {
    Instance inst(vs);
    if (motif.matches_level(level, detail::induced_mask(g, inst))) out.push_back(inst);
  });
  std::sort(out.begin(), out.end());
  return out;
}

inline std::uint64_t exact_count(const Graph& g, const SegmentedMotif& motif,
                                 std::uint64_t budget = kDefaultEnumerationBudget) {
  return enumerate_instances(g, motif, motif.size(), budget).size();
}

using CountTable = std::unordered_map<Instance, std::uint64_t, InstanceHash>;

// f_i(g): number of copies of the motif whose assignment chain passes
// through g. Tables are kept for levels 2..k-1.
struct CountProfile {
  int k = 0;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> per_level_counts;  // index i, levels 2..k
  std::vector<CountTable> f_tables;             // index i, levels 2..k-1
  std::vector<std::uint64_t> f_max_per_level;   // index i, levels 2..k-1
  std::uint64_t f_max = 0;

  std::uint64_t f(const Instance& g) const {
    const int i = g.size();
    if (i < 2 || i >= k) throw Error("no count table for level " + std::to_string(i));
    const auto& table = f_tables[static_cast<std::size_t>(i)];
    auto it = table.find(g);
    return it == table.end() ? 0 : it->second;
  }
};

inline CountProfile count_profile(const Graph& g, const SegmentedMotif& motif,
                                  std::uint64_t budget = kDefaultEnumerationBudget) {
  const int k = motif.size();
  CountProfile prof;
  prof.k = k;
  prof.per_level_counts.assign(static_cast<std::size_t>(k + 1), 0);
  prof.f_tables.resize(static_cast<std::size_t>(k));
  prof.f_max_per_level.assign(static_cast<std::size_t>(k), 0);
  for (int i = 2; i <= k; ++i)
    prof.per_level_counts[static_cast<std::size_t>(i)] = enumerate_instances(g, motif, i, budget).size();

  QueryLedger scratch(g.vertex_count());
  NeighborhoodOracle oracle(g, scratch);
  auto copies = enumerate_instances(g, motif, k, budget);
  prof.total = copies.size();
  for (const Instance& copy : copies) {
    Instance cur = copy;
    for (int i = k - 1; i >= 2; --i) {
      cur = assign(oracle, cur, motif);
      ++prof.f_tables[static_cast<std::size_t>(i)][cur];
    }
  }
  for (int i = 2; i < k; ++i) {
    for (const auto& [inst, f] : prof.f_tables[static_cast<std::size_t>(i)]) {
      auto& mx = prof.f_max_per_level[static_cast<std::size_t>(i)];
      mx = std::max(mx, f);
    }
    prof.f_max = std::max(prof.f_max, prof.f_max_per_level[static_cast<std::size_t>(i)]);
  }
  return prof;
}

struct Degeneracy {
  std::size_t value = 0;
  std::vector<Vertex> order;  // removal order
};

// Core peeling: repeatedly remove a minimum-degree vertex.
inline Degeneracy degeneracy(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::size_t max_deg = 0;
  std::vector<std::size_t> deg(n);
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    max_deg = std::max(max_deg, deg[v]);
  }
  std::vector<std::vector<Vertex>> buckets(max_deg + 1);
  for (Vertex v = 0; v < n; ++v) buckets[deg[v]].push_back(v);
  std::vector<char> removed(n, 0);
  Degeneracy out;
  out.order.reserve(n);
  std::size_t cur = 0;
  while (out.order.size() < n) {
    cur = cur > 0 ? cur - 1 : 0;
    while (buckets[cur].empty()) ++cur;
    Vertex v = buckets[cur].back();
    buckets[cur].pop_back();
    if (removed[v] || deg[v] != cur) continue;  // stale bucket entry
    removed[v] = 1;
    out.value = std::max(out.value, cur);
    out.order.push_back(v);
    for (Vertex u : g.adjacency(v)) {
      if (removed[u]) continue;
      --deg[u];
      buckets[deg[u]].push_back(u);
    }
  }
  return out;
}

// D({seg_i}): sum of D(g) over every copy g of seg_i.
inline double total_seg_degree(const Graph& g, const SegmentedMotif& motif, int level,
                               std::uint64_t budget = kDefaultEnumerationBudget) {
  QueryLedger scratch(g.vertex_count());
  NeighborhoodOracle oracle(g, scratch);
  double sum = 0;
  for (const Instance& inst : enumerate_instances(g, motif, level, budget))
    sum += static_cast<double>(seg_degree(oracle, inst, motif));
  return sum;
}

struct ArboricityCheck {
  double lhs = 0;  // D({seg_i})
  double rhs = 0;  // 2m ((c+1) alpha)^(i-1-c) n^c with alpha = degeneracy
  bool holds = false;
};

inline ArboricityCheck check_arboricity_bound(const Graph& g, const SegmentedMotif& motif, int level,
                                              std::uint64_t budget = kDefaultEnumerationBudget) {
  ArboricityCheck out;
  out.lhs = total_seg_degree(g, motif, level, budget);
  const double c = motif.slack();
  const double alpha = static_cast<double>(degeneracy(g).value);
  const double m = static_cast<double>(g.edge_count());
  const double n = static_cast<double>(g.vertex_count());
  out.rhs = 2.0 * m * std::pow((c + 1.0) * alpha, level - 1 - c) * std::pow(n, c);
  out.holds = out.lhs <= out.rhs;
  return out;
}

}  // namespace crawlcount
