#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "crawlcount/error.hpp"
#include "crawlcount/graph.hpp"
#include "crawlcount/pattern.hpp"

namespace crawlcount {

// A vertex set of the host graph in canonical (strictly increasing) order.
class Instance {
 public:
  Instance() = default;
  Instance(std::initializer_list<Vertex> vs) {
    for (Vertex v : vs) push(v);
    normalize();
  }
  explicit Instance(std::span<const Vertex> vs) {
    for (Vertex v : vs) push(v);
    normalize();
  }

  int size() const { return size_; }
  int level() const { return size_; }
  Vertex operator[](int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  std::span<const Vertex> vertices() const { return {vertices_.data(), static_cast<std::size_t>(size_)}; }
  auto begin() const { return vertices_.begin(); }
  auto end() const { return vertices_.begin() + size_; }

  bool contains(Vertex v) const { return std::binary_search(begin(), end(), v); }

  Instance with(Vertex v) const {
    if (size_ >= kMaxPatternSize) throw Error("instance too large");
    if (contains(v)) throw Error("vertex already in instance");
    Instance out = *this;
    auto pos = std::upper_bound(out.vertices_.begin(), out.vertices_.begin() + size_, v);
    std::move_backward(pos, out.vertices_.begin() + size_, out.vertices_.begin() + size_ + 1);
    *pos = v;
    ++out.size_;
    return out;
  }

  Instance without_position(int p) const {
    Instance out;
    for (int i = 0; i < size_; ++i)
      if (i != p) out.vertices_[static_cast<std::size_t>(out.size_++)] = vertices_[static_cast<std::size_t>(i)];
    return out;
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  friend std::strong_ordering operator<=>(const Instance& a, const Instance& b) {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }

  std::string str() const {
    std::string s = "{";
    for (int i = 0; i < size_; ++i) s += (i ? "," : "") + std::to_string(vertices_[static_cast<std::size_t>(i)]);
    return s + "}";
  }

 private:
  void push(Vertex v) {
    if (size_ >= kMaxPatternSize) throw Error("instance too large");
    vertices_[static_cast<std::size_t>(size_++)] = v;
  }
  void normalize() {
    std::sort(vertices_.begin(), vertices_.begin() + size_);
    if (std::adjacent_find(vertices_.begin(), vertices_.begin() + size_) != vertices_.begin() + size_)
      throw Error("instance has repeated vertices");
  }

  std::array<Vertex, kMaxPatternSize> vertices_{};
  std::int8_t size_ = 0;
};

struct InstanceHash {
  std::size_t operator()(const Instance& g) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (Vertex v : g) h = (h ^ v) * 0x100000001b3ull;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

namespace detail {

// |A_1 ∪ ... ∪ A_r| for sorted spans.
inline std::size_t union_size(std::span<const std::span<const Vertex>> lists) {
  if (lists.size() == 1) return lists[0].size();
  std::array<std::size_t, kMaxPatternSize> pos{};
  std::size_t count = 0;
  for (;;) {
    bool any = false;
    Vertex lo = 0;
    for (std::size_t j = 0; j < lists.size(); ++j) {
      if (pos[j] < lists[j].size() && (!any || lists[j][pos[j]] < lo)) {
        lo = lists[j][pos[j]];
        any = true;
      }
    }
    if (!any) return count;
    ++count;
    for (std::size_t j = 0; j < lists.size(); ++j)
      if (pos[j] < lists[j].size() && lists[j][pos[j]] == lo) ++pos[j];
  }
}

inline std::vector<Vertex> union_of(std::span<const std::span<const Vertex>> lists) {
  std::vector<Vertex> out;
  for (auto l : lists) out.insert(out.end(), l.begin(), l.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Visits the r-subsets of {0..n-1} in lexicographic order as bitsets.
template <class Fn>
void for_each_subset(int n, int r, Fn&& fn) {
  std::array<int, kMaxPatternSize> idx{};
  for (int i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    fn(std::span<const int>(idx.data(), static_cast<std::size_t>(r)));
    int i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Induced adjacency of `inst` in position order. Queries every vertex but the
// last, since each pair (a, b) with a < b is resolved from N(a).
inline SmallGraph local_graph(const NeighborhoodOracle& oracle, const Instance& inst) {
  SmallGraph local(inst.size());
  for (int a = 0; a + 1 < inst.size(); ++a) {
    auto adj = oracle.neighbors(inst[a]);
    for (int b = a + 1; b < inst.size(); ++b)
      if (std::binary_search(adj.begin(), adj.end(), inst[b])) local.add_edge(a, b);
  }
  return local;
}

inline std::uint32_t mask_without(const SmallGraph& local, int drop) {
  std::array<int, kMaxPatternSize> keep{};
  int n = 0;
  for (int a = 0; a < local.size(); ++a)
    if (a != drop) keep[static_cast<std::size_t>(n++)] = a;
  return local.induced(std::span<const int>(keep.data(), static_cast<std::size_t>(n))).edge_mask();
}

// Position of the smallest vertex whose removal leaves a connected copy of
// seg_{|local|-1}; -1 if none.
inline int assign_position(const SegmentedMotif& motif, const SmallGraph& local) {
  const int size = local.size();
  const std::uint8_t all = std::uint8_t((1u << size) - 1);
  for (int p = 0; p < size; ++p) {
    std::uint8_t rest = all & std::uint8_t(~(1u << p));
    if (!local.connected(rest)) continue;
    if (motif.matches_level(size - 1, mask_without(local, p))) return p;
  }
  return -1;
}

}  // namespace detail

// The (c+1)-subset of `inst` with the smallest combined neighborhood; the
// first minimum in lexicographic order wins.
inline Instance representative(const NeighborhoodOracle& oracle, const Instance& inst, int c) {
  if (c < 0) throw Error("negative slack");
  if (inst.size() <= c) throw Error("instance has at most c vertices; no representative");
  std::array<std::span<const Vertex>, kMaxPatternSize> adj{};
  for (int i = 0; i < inst.size(); ++i) adj[static_cast<std::size_t>(i)] = oracle.neighbors(inst[i]);

  std::array<int, kMaxPatternSize> best{};
  std::size_t best_size = 0;
  bool have = false;
  detail::for_each_subset(inst.size(), c + 1, [&](std::span<const int> pick) {
    std::array<std::span<const Vertex>, kMaxPatternSize> lists{};
    for (std::size_t j = 0; j < pick.size(); ++j) lists[j] = adj[static_cast<std::size_t>(pick[j])];
    std::size_t sz = detail::union_size(std::span<const std::span<const Vertex>>(lists.data(), pick.size()));
    if (!have || sz < best_size) {
      have = true;
      best_size = sz;
      std::copy(pick.begin(), pick.end(), best.begin());
    }
  });
  Instance rep;
  for (int j = 0; j <= c; ++j) rep = rep.with(inst[best[static_cast<std::size_t>(j)]]);
  return rep;
}

// N(R(inst)) as a sorted list. Members of inst are not excluded.
inline std::vector<Vertex> seg_neighborhood(const NeighborhoodOracle& oracle, const Instance& inst, int c) {
  Instance rep = representative(oracle, inst, c);
  std::array<std::span<const Vertex>, kMaxPatternSize> lists{};
  for (int j = 0; j < rep.size(); ++j) lists[static_cast<std::size_t>(j)] = oracle.neighbors(rep[j]);
  return detail::union_of(std::span<const std::span<const Vertex>>(lists.data(), static_cast<std::size_t>(rep.size())));
}

inline std::size_t seg_degree(const NeighborhoodOracle& oracle, const Instance& inst, int c) {
  Instance rep = representative(oracle, inst, c);
  std::array<std::span<const Vertex>, kMaxPatternSize> lists{};
  for (int j = 0; j < rep.size(); ++j) lists[static_cast<std::size_t>(j)] = oracle.neighbors(rep[j]);
  return detail::union_size(std::span<const std::span<const Vertex>>(lists.data(), static_cast<std::size_t>(rep.size())));
}

// Degree w.r.t. the segmentation at the instance's own level, using the
// motif's slack (clamped so that small levels use the whole instance).
inline std::size_t seg_degree(const NeighborhoodOracle& oracle, const Instance& inst, const SegmentedMotif& motif) {
  return seg_degree(oracle, inst, motif.representative_size(inst.size()) - 1);
}

inline std::vector<Vertex> seg_neighborhood(const NeighborhoodOracle& oracle, const Instance& inst,
                                            const SegmentedMotif& motif) {
  return seg_neighborhood(oracle, inst, motif.representative_size(inst.size()) - 1);
}

// Maps a copy of seg_{i+1} to the copy of seg_i left after deleting its
// smallest removable vertex.
inline Instance assign(const NeighborhoodOracle& oracle, const Instance& inst, const SegmentedMotif& motif) {
  if (inst.size() < 3 || inst.size() > motif.size()) throw Error("assign: instance level out of range");
  SmallGraph local = detail::local_graph(oracle, inst);
  int p = detail::assign_position(motif, local);
  if (p < 0) throw Error("unassignable instance " + inst.str());
  return inst.without_position(p);
}

// Accept iff parent+u is a copy of seg_{i+1} that is assigned back to parent.
inline bool check_extension(const NeighborhoodOracle& oracle, const Instance& parent, Vertex u,
                            const SegmentedMotif& motif) {
  if (parent.size() >= motif.size() || parent.contains(u)) return false;
  Instance ext = parent.with(u);
  SmallGraph local = detail::local_graph(oracle, ext);
  if (!motif.matches_level(ext.size(), local.edge_mask())) return false;
  int p = detail::assign_position(motif, local);
  return p >= 0 && ext.without_position(p) == parent;
}

}  // namespace crawlcount
