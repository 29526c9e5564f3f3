#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crawlcount/error.hpp"
#include "crawlcount/graph.hpp"

namespace crawlcount {

inline constexpr int kMaxPatternSize = 8;

// Bit index of the unordered pair {a, b} in a packed edge mask.
constexpr int pair_bit(int a, int b) {
  if (a > b) std::swap(a, b);
  return b * (b - 1) / 2 + a;
}

// Graph on at most 8 vertices stored as adjacency bit rows.
class SmallGraph {
 public:
  SmallGraph() = default;
  explicit SmallGraph(int size) : size_(size) {
    if (size < 0 || size > kMaxPatternSize) throw Error("small graph size must be in 0..8");
  }

  int size() const { return size_; }

  void add_edge(int a, int b) {
    if (a == b || a < 0 || b < 0 || a >= size_ || b >= size_) throw Error("bad pattern edge");
    rows_[a] |= std::uint8_t(1u << b);
    rows_[b] |= std::uint8_t(1u << a);
  }

  bool has_edge(int a, int b) const { return (rows_[a] >> b) & 1u; }
  std::uint8_t row(int a) const { return rows_[a]; }
  int degree(int a) const { return std::popcount(rows_[a]); }

  int edge_count() const {
    int total = 0;
    for (int a = 0; a < size_; ++a) total += degree(a);
    return total / 2;
  }

  // Connectivity of the subgraph induced on the vertex bitset `subset`.
  bool connected(std::uint8_t subset) const {
    if (subset == 0) return true;
    std::uint8_t seen = subset & std::uint8_t(-subset);
    std::uint8_t frontier = seen;
    while (frontier) {
      std::uint8_t next = 0;
      for (int a = 0; a < size_; ++a)
        if ((frontier >> a) & 1u) next |= rows_[a];
      next &= subset & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen == subset;
  }
  bool connected() const { return connected(std::uint8_t((1u << size_) - 1)); }

  // Induced subgraph on vertices listed in `order`, relabeled 0..|order|-1.
  SmallGraph induced(std::span<const int> order) const {
    SmallGraph out(static_cast<int>(order.size()));
    for (std::size_t a = 0; a < order.size(); ++a)
      for (std::size_t b = a + 1; b < order.size(); ++b)
        if (has_edge(order[a], order[b])) out.add_edge(int(a), int(b));
    return out;
  }

  std::uint32_t edge_mask() const {
    std::uint32_t mask = 0;
    for (int b = 1; b < size_; ++b)
      for (int a = 0; a < b; ++a)
        if (has_edge(a, b)) mask |= 1u << pair_bit(a, b);
    return mask;
  }

  static SmallGraph from_mask(int size, std::uint32_t mask) {
    SmallGraph g(size);
    for (int b = 1; b < size; ++b)
      for (int a = 0; a < b; ++a)
        if ((mask >> pair_bit(a, b)) & 1u) g.add_edge(a, b);
    return g;
  }

  friend bool operator==(const SmallGraph&, const SmallGraph&) = default;

 private:
  int size_ = 0;
  std::array<std::uint8_t, kMaxPatternSize> rows_{};
};

// Brute-force induced isomorphism test with a degree-sequence pre-filter.
inline bool isomorphic(const SmallGraph& a, const SmallGraph& b) {
  if (a.size() != b.size()) throw Error("isomorphism test on graphs of different size");
  if (a.edge_count() != b.edge_count()) return false;
  const int k = a.size();
  std::array<int, kMaxPatternSize> da{}, db{};
  for (int v = 0; v < k; ++v) {
    da[v] = a.degree(v);
    db[v] = b.degree(v);
  }
  std::sort(da.begin(), da.begin() + k);
  std::sort(db.begin(), db.begin() + k);
  if (!std::equal(da.begin(), da.begin() + k, db.begin())) return false;

  std::array<int, kMaxPatternSize> perm{};
  std::iota(perm.begin(), perm.begin() + k, 0);
  do {
    bool match = true;
    for (int x = 0; x < k && match; ++x) {
      if (a.degree(x) != b.degree(perm[x])) match = false;
      for (int y = x + 1; y < k && match; ++y)
        if (a.has_edge(x, y) != b.has_edge(perm[x], perm[y])) match = false;
    }
    if (match) return true;
  } while (std::next_permutation(perm.begin(), perm.begin() + k));
  return false;
}

// The motif together with its density slack c.
struct Pattern {
  SmallGraph graph;
  int slack = 0;

  int size() const { return graph.size(); }

  void check() const {
    if (graph.size() < 3 || graph.size() > kMaxPatternSize) throw Error("pattern size must be in 3..8");
    if (!graph.connected()) throw Error("pattern is not connected");
    if (slack < 0) throw Error("density slack must be nonnegative");
  }
};

// Insertion order v_1..v_k; seg_i is the pattern induced on the first i.
struct Segmentation {
  std::vector<int> order;

  SmallGraph level(const Pattern& p, int i) const {
    return p.graph.induced(std::span<const int>(order).first(static_cast<std::size_t>(i)));
  }
};

struct SegmentationReport {
  int min_slack = 0;                 // smallest c for which the chain is c-dense
  std::vector<bool> level_connected;  // index i-2 for level i
  std::optional<int> disconnected_level;

  bool valid() const { return !disconnected_level.has_value(); }
};

inline void check_permutation(const Pattern& p, const Segmentation& s) {
  std::vector<int> sorted = s.order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expect(static_cast<std::size_t>(p.size()));
  std::iota(expect.begin(), expect.end(), 0);
  if (sorted != expect) throw Error("segmentation order is not a permutation of the pattern vertices");
}

inline SegmentationReport validate_segmentation(const Pattern& p, const Segmentation& s) {
  check_permutation(p, s);
  SegmentationReport report;
  const int k = p.size();
  for (int i = 2; i <= k; ++i) {
    SmallGraph level = s.level(p, i);
    bool conn = level.connected();
    report.level_connected.push_back(conn);
    if (!conn && !report.disconnected_level) report.disconnected_level = i;
    for (int v = 0; v < i; ++v)
      report.min_slack = std::max(report.min_slack, i - 1 - level.degree(v));
  }
  return report;
}

// Exhaustive search over insertion orders; ties go to the lexicographically
// smallest order.
inline Segmentation auto_segment(const Pattern& p) {
  p.check();
  Segmentation best;
  int best_slack = kMaxPatternSize;
  Segmentation trial;
  trial.order.resize(static_cast<std::size_t>(p.size()));
  std::iota(trial.order.begin(), trial.order.end(), 0);
  do {
    auto report = validate_segmentation(p, trial);
    if (report.valid() && report.min_slack < best_slack) {
      best_slack = report.min_slack;
      best = trial;
    }
  } while (std::next_permutation(trial.order.begin(), trial.order.end()));
  if (best.order.empty()) throw Error("pattern admits no connected segmentation");
  return best;
}

// Is `adj` induced-isomorphic to seg_i?
inline bool induced_isomorphic(const SmallGraph& adj, const Pattern& p, const Segmentation& s, int i) {
  if (adj.size() != i) throw Error("dimension mismatch in isomorphism test");
  return isomorphic(adj, s.level(p, i));
}

inline std::vector<std::string> builtin_pattern_names() { return {"g33", "g45", "g46", "g59", "g510"}; }

struct PatternWithOrder {
  Pattern pattern;
  Segmentation segmentation;
};

inline PatternWithOrder builtin_pattern(const std::string& name) {
  auto clique = [](int k) {
    SmallGraph g(k);
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) g.add_edge(a, b);
    return g;
  };
  auto identity = [](int k) {
    Segmentation s;
    s.order.resize(static_cast<std::size_t>(k));
    std::iota(s.order.begin(), s.order.end(), 0);
    return s;
  };
  if (name == "g33") return {{clique(3), 0}, identity(3)};
  if (name == "g46") return {{clique(4), 0}, identity(4)};
  if (name == "g510") return {{clique(5), 0}, identity(5)};
  if (name == "g45") {
    // 4-cycle 0-1-2-3 with chord 0-2; degree-2 vertex 3 enters last.
    SmallGraph g(4);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(3, 0);
    g.add_edge(0, 2);
    return {{g, 1}, identity(4)};
  }
  if (name == "g59") {
    // K5 minus {3,4}.
    SmallGraph h(5);
    for (int a = 0; a < 5; ++a)
      for (int b = a + 1; b < 5; ++b)
        if (!(a == 3 && b == 4)) h.add_edge(a, b);
    return {{h, 1}, identity(5)};
  }
  std::string names;
  for (const auto& n : builtin_pattern_names()) names += (names.empty() ? "" : ", ") + n;
  throw Error("unknown pattern '" + name + "' (valid: " + names + ")");
}

// Pattern file: "k c", optional "order v1 .. vk", then "a b" edges.
inline PatternWithOrder load_pattern(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<int> k;
  int slack = 0;
  std::optional<Segmentation> seg;
  SmallGraph g;
  bool seen_edge = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto toks = detail::split_ws(text);
    if (!k) {
      if (toks.size() != 2) throw ParseError(lineno, "expected header 'k c'");
      auto kk = detail::parse_int<int>(toks[0]);
      auto cc = detail::parse_int<int>(toks[1]);
      if (!kk || !cc) throw ParseError(lineno, "non-integer header");
      if (*kk < 3 || *kk > kMaxPatternSize) throw ParseError(lineno, "k must be in 3..8");
      k = *kk;
      slack = *cc;
      g = SmallGraph(*k);
      continue;
    }
    if (toks.front() == "order") {
      if (seen_edge || seg) throw ParseError(lineno, "order line must directly follow the header");
      if (toks.size() != static_cast<std::size_t>(*k) + 1) throw ParseError(lineno, "order needs k vertices");
      Segmentation s;
      for (std::size_t t = 1; t < toks.size(); ++t) {
        auto v = detail::parse_int<int>(toks[t]);
        if (!v) throw ParseError(lineno, "non-integer order entry");
        s.order.push_back(*v);
      }
      seg = std::move(s);
      continue;
    }
    if (toks.size() != 2) throw ParseError(lineno, "expected edge 'a b'");
    auto a = detail::parse_int<int>(toks[0]);
    auto b = detail::parse_int<int>(toks[1]);
    if (!a || !b || *a < 0 || *b < 0 || *a >= *k || *b >= *k || *a == *b)
      throw ParseError(lineno, "bad pattern edge");
    g.add_edge(*a, *b);
    seen_edge = true;
  }
  if (!k) throw Error("pattern file is empty");
  Pattern p{g, slack};
  p.check();
  Segmentation s = seg ? *seg : auto_segment(p);
  check_permutation(p, s);
  return {p, s};
}

// Validated pattern + segmentation with every level's isomorphism class
// precomputed as the set of packed edge masks it can take.
class SegmentedMotif {
 public:
  SegmentedMotif(Pattern p, Segmentation s) : pattern_(std::move(p)), seg_(std::move(s)) {
    pattern_.check();
    auto report = validate_segmentation(pattern_, seg_);
    if (!report.valid())
      throw Error("segmentation level " + std::to_string(*report.disconnected_level) + " is disconnected");
    if (report.min_slack > pattern_.slack)
      throw Error("segmentation needs slack " + std::to_string(report.min_slack) + " but pattern allows " +
                  std::to_string(pattern_.slack));
    const int k = pattern_.size();
    signatures_.resize(static_cast<std::size_t>(k + 1));
    for (int i = 2; i <= k; ++i) {
      SmallGraph level = seg_.level(pattern_, i);
      auto& sigs = signatures_[static_cast<std::size_t>(i)];
      std::array<int, kMaxPatternSize> perm{};
      std::iota(perm.begin(), perm.begin() + i, 0);
      do {
        sigs.push_back(level.induced(std::span<const int>(perm.data(), static_cast<std::size_t>(i))).edge_mask());
      } while (std::next_permutation(perm.begin(), perm.begin() + i));
      std::sort(sigs.begin(), sigs.end());
      sigs.erase(std::unique(sigs.begin(), sigs.end()), sigs.end());
    }
  }
  explicit SegmentedMotif(const PatternWithOrder& pw) : SegmentedMotif(pw.pattern, pw.segmentation) {}

  const Pattern& pattern() const { return pattern_; }
  const Segmentation& segmentation() const { return seg_; }
  int size() const { return pattern_.size(); }
  int slack() const { return pattern_.slack; }

  // Representative size at level i. Levels with at most c vertices use the
  // whole instance; connectivity of seg_{i+1} keeps extensions reachable.
  int representative_size(int level) const { return std::min(pattern_.slack + 1, level); }

  // Edge mask of an i-vertex graph in any labeling -> is it a copy of seg_i?
  bool matches_level(int i, std::uint32_t mask) const {
    const auto& sigs = signatures_[static_cast<std::size_t>(i)];
    return std::binary_search(sigs.begin(), sigs.end(), mask);
  }

 private:
  Pattern pattern_;
  Segmentation seg_;
  std::vector<std::vector<std::uint32_t>> signatures_;
};

}  // namespace crawlcount
