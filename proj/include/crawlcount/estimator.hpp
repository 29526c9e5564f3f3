#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "crawlcount/error.hpp"
#include "crawlcount/graph.hpp"
#include "crawlcount/pattern.hpp"
#include "crawlcount/random_walk.hpp"
#include "crawlcount/subgraph.hpp"

namespace crawlcount {

// Multiset L_i of seg_i copies with their degrees D(g) and prefix sums for
// degree-proportional sampling.
class LayerState {
 public:
  explicit LayerState(int level = 2) : level_(level) {}

  void add(const Instance& g, const Instance& rep, std::uint64_t seg_degree) {
    members_.push_back(g);
    representatives_.push_back(rep);
    degrees_.push_back(seg_degree);
    total_ += seg_degree;
    prefix_.push_back(total_);
  }

  int level() const { return level_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<Instance>& members() const { return members_; }
  const std::vector<std::uint64_t>& member_degrees() const { return degrees_; }
  const Instance& representative(std::size_t j) const { return representatives_[j]; }
  std::uint64_t total_degree() const { return total_; }

  // Index j with probability D(g_j) / D_i.
  std::size_t sample_index(Rng& rng) const {
    if (total_ == 0) throw Error("degenerate layer: total degree is zero");
    std::uniform_int_distribution<std::uint64_t> pick(0, total_ - 1);
    std::uint64_t x = pick(rng);
    return static_cast<std::size_t>(std::upper_bound(prefix_.begin(), prefix_.end(), x) - prefix_.begin());
  }

 private:
  int level_;
  std::vector<Instance> members_;
  std::vector<Instance> representatives_;
  std::vector<std::uint64_t> degrees_;
  std::vector<std::uint64_t> prefix_;
  std::uint64_t total_ = 0;
};

inline const Instance& weighted_sample(const LayerState& layer, Rng& rng) {
  return layer.members()[layer.sample_index(rng)];
}

enum class EdgeCountMode { exact, estimated };

struct EstimateConfig {
  std::vector<std::size_t> layer_sizes;  // l_3..l_k
  WalkConfig walk;                       // walk.length is r~; walk.seed is unused here
  EdgeCountMode edge_count_mode = EdgeCountMode::exact;
  EdgeCountConfig edge_count;            // used in estimated mode
  double epsilon = 0.1;                  // used only by recommendations
  std::uint64_t seed = 1;

  void check(int k) const {
    if (layer_sizes.size() != static_cast<std::size_t>(k - 2))
      throw Error("expected " + std::to_string(k - 2) + " layer sizes (l_3..l_k), got " +
                  std::to_string(layer_sizes.size()));
    for (std::size_t l : layer_sizes)
      if (l < 1) throw Error("layer sizes must be at least 1");
    if (walk.length < 1) throw Error("walk length must be at least 1");
  }
};

namespace detail {

// D(g) and R(g) at the instance's level.
inline std::pair<Instance, std::uint64_t> rep_and_degree(const NeighborhoodOracle& oracle, const Instance& g,
                                                         const SegmentedMotif& motif) {
  Instance rep = representative(oracle, g, motif.representative_size(g.size()) - 1);
  std::array<std::span<const Vertex>, kMaxPatternSize> lists{};
  for (int j = 0; j < rep.size(); ++j) lists[static_cast<std::size_t>(j)] = oracle.neighbors(rep[j]);
  auto d = union_size(std::span<const std::span<const Vertex>>(lists.data(), static_cast<std::size_t>(rep.size())));
  return {rep, d};
}

inline Vertex uniform_from_neighborhood(const NeighborhoodOracle& oracle, const Instance& rep, Rng& rng) {
  if (rep.size() == 1) {
    auto adj = oracle.neighbors(rep[0]);
    std::uniform_int_distribution<std::size_t> pick(0, adj.size() - 1);
    return adj[pick(rng)];
  }
  std::array<std::span<const Vertex>, kMaxPatternSize> lists{};
  for (int j = 0; j < rep.size(); ++j) lists[static_cast<std::size_t>(j)] = oracle.neighbors(rep[j]);
  auto all = union_of(std::span<const std::span<const Vertex>>(lists.data(), static_cast<std::size_t>(rep.size())));
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  return all[pick(rng)];
}

}  // namespace detail

// L_2 from walk edges.
inline LayerState make_edge_layer(const NeighborhoodOracle& oracle, const SegmentedMotif& motif,
                                  std::span<const Edge> edges) {
  LayerState layer(2);
  for (auto [u, v] : edges) {
    Instance e{u, v};
    auto [rep, d] = detail::rep_and_degree(oracle, e, motif);
    layer.add(e, rep, d);
  }
  return layer;
}

// One trial: g ~ p_i, u uniform from N_seg(g); returns g+u when accepted.
inline std::optional<Instance> extension_trial(const NeighborhoodOracle& oracle, const SegmentedMotif& motif,
                                               const LayerState& layer, Rng& rng) {
  std::size_t j = layer.sample_index(rng);
  const Instance& g = layer.members()[j];
  Vertex u = detail::uniform_from_neighborhood(oracle, layer.representative(j), rng);
  if (!check_extension(oracle, g, u, motif)) return std::nullopt;
  return g.with(u);
}

// L_{i+1} from `trials` independent trials on L_i.
inline LayerState extend_layer(const NeighborhoodOracle& oracle, const SegmentedMotif& motif,
                               const LayerState& layer, std::size_t trials, Rng& rng) {
  LayerState next(layer.level() + 1);
  if (layer.total_degree() == 0) return next;
  for (std::size_t t = 0; t < trials; ++t) {
    if (auto ext = extension_trial(oracle, motif, layer, rng)) {
      auto [rep, d] = detail::rep_and_degree(oracle, *ext, motif);
      next.add(*ext, rep, d);
    }
  }
  return next;
}

// Y: accepted trials at the final level. The final layer is not stored.
inline std::uint64_t count_final(const NeighborhoodOracle& oracle, const SegmentedMotif& motif,
                                 const LayerState& layer, std::size_t trials, Rng& rng) {
  if (layer.total_degree() == 0) return 0;
  std::uint64_t y = 0;
  for (std::size_t t = 0; t < trials; ++t)
    if (extension_trial(oracle, motif, layer, rng)) ++y;
  return y;
}

struct LayerRun {
  std::vector<LayerState> layers;  // L_2..L_{k-1}
  std::uint64_t successes = 0;     // Y
  bool degenerate = false;
  std::vector<std::string> warnings;
};

// L_2 = walk edges, then l_3..l_{k-1} trials per level, then l_k final trials.
inline LayerRun build_layers(const NeighborhoodOracle& oracle, const SegmentedMotif& motif,
                             std::span<const Edge> walk_edges, std::span<const std::size_t> layer_sizes, Rng& rng) {
  const int k = motif.size();
  if (layer_sizes.size() != static_cast<std::size_t>(k - 2)) throw Error("layer size count does not match pattern");
  LayerRun run;
  run.layers.push_back(make_edge_layer(oracle, motif, walk_edges));
  for (int i = 3; i < k; ++i) {
    const LayerState& prev = run.layers.back();
    std::size_t trials = layer_sizes[static_cast<std::size_t>(i - 3)];
    run.layers.push_back(extend_layer(oracle, motif, prev, trials, rng));
    if (run.layers.back().total_degree() == 0) {
      run.degenerate = true;
      run.warnings.push_back("degenerate layer L_" + std::to_string(i));
      return run;
    }
  }
  run.successes = count_final(oracle, motif, run.layers.back(), layer_sizes.back(), rng);
  return run;
}

inline LayerRun build_layers(const Graph& g, QueryLedger& ledger, const SegmentedMotif& motif,
                             const EstimateConfig& cfg) {
  cfg.check(motif.size());
  NeighborhoodOracle oracle(g, ledger);
  Rng rng(cfg.seed);
  auto edges = simple_random_walk(g, ledger, cfg.walk, rng);
  return build_layers(oracle, motif, edges, cfg.layer_sizes, rng);
}

// c_i = (m / r~) * prod_{j=3}^{i-1} (D_{j-1} / l_j) * D_{i-1}.
// `layer_sizes` holds l_3..l_{i-1}; `layer_degrees` holds D_2..D_{i-1}.
inline double scaling_constant(int i, double m, std::size_t walk_length, std::span<const std::size_t> layer_sizes,
                               std::span<const double> layer_degrees) {
  if (i < 3) throw Error("scaling constant is defined for i >= 3");
  if (layer_sizes.size() < static_cast<std::size_t>(i - 3) || layer_degrees.size() < static_cast<std::size_t>(i - 2))
    throw Error("scaling constant needs l_3..l_{i-1} and D_2..D_{i-1}");
  if (walk_length < 1) throw Error("walk length must be at least 1");
  for (int j = 2; j <= i - 1; ++j)
    if (layer_degrees[static_cast<std::size_t>(j - 2)] <= 0) throw Error("zero layer degree D_" + std::to_string(j));
  double c = m / static_cast<double>(walk_length);
  for (int j = 3; j <= i - 1; ++j) {
    std::size_t l = layer_sizes[static_cast<std::size_t>(j - 3)];
    if (l < 1) throw Error("layer sizes must be at least 1");
    c *= layer_degrees[static_cast<std::size_t>(j - 3)] / static_cast<double>(l);
  }
  return c * layer_degrees[static_cast<std::size_t>(i - 3)];
}

struct LayerDiagnostics {
  int level = 0;
  std::size_t size = 0;        // |L_i|; for the final level this is Y
  std::uint64_t total_degree = 0;  // D_i (0 for the final level)
  std::size_t trials = 0;      // r~ at level 2, l_i above
  double acceptance_rate = 1.0;
  double scaling = 0.0;        // c_i (c_2 = m); 0 when undefined
};

struct EstimateResult {
  double estimate = 0.0;      // T^
  std::uint64_t successes = 0;  // Y
  double scaling = 0.0;       // c_k, 0 for degenerate runs
  double edge_count = 0.0;    // m used (exact or estimated)
  std::size_t walk_length = 0;
  std::vector<std::size_t> layer_sizes;
  std::vector<LayerDiagnostics> per_layer;  // levels 2..k
  std::size_t oracle_calls = 0;
  std::size_t queried_vertices = 0;
  double edges_observed_fraction = 0.0;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

namespace detail {

inline EstimateResult summarize(const LayerRun& run, const SegmentedMotif& motif, double m, std::size_t walk_len,
                                std::span<const std::size_t> layer_sizes) {
  const int k = motif.size();
  EstimateResult res;
  res.successes = run.successes;
  res.edge_count = m;
  res.walk_length = walk_len;
  res.layer_sizes.assign(layer_sizes.begin(), layer_sizes.end());
  res.degenerate = run.degenerate;
  res.warnings = run.warnings;

  std::vector<double> degrees;
  for (const auto& layer : run.layers) degrees.push_back(static_cast<double>(layer.total_degree()));

  for (std::size_t idx = 0; idx < run.layers.size(); ++idx) {
    const auto& layer = run.layers[idx];
    LayerDiagnostics d;
    d.level = layer.level();
    d.size = layer.size();
    d.total_degree = layer.total_degree();
    d.trials = d.level == 2 ? walk_len : layer_sizes[static_cast<std::size_t>(d.level - 3)];
    d.acceptance_rate = d.trials ? static_cast<double>(d.size) / static_cast<double>(d.trials) : 0.0;
    if (d.level == 2)
      d.scaling = m;
    else if (std::all_of(degrees.begin(), degrees.begin() + static_cast<std::ptrdiff_t>(idx),
                         [](double x) { return x > 0; }))
      d.scaling = scaling_constant(d.level, m, walk_len, layer_sizes, degrees);
    res.per_layer.push_back(d);
  }

  if (!run.degenerate) {
    LayerDiagnostics last;
    last.level = k;
    last.size = run.successes;
    last.trials = layer_sizes.back();
    last.acceptance_rate = static_cast<double>(run.successes) / static_cast<double>(last.trials);
    last.scaling = scaling_constant(k, m, walk_len, layer_sizes, degrees);
    res.per_layer.push_back(last);
    res.scaling = last.scaling;
    res.estimate = static_cast<double>(run.successes) * res.scaling / static_cast<double>(layer_sizes.back());
  }
  return res;
}

}  // namespace detail

// T^ = Y * c_k / l_k. Degenerate runs (an empty intermediate layer) return 0
// with a warning.
inline EstimateResult estimate_count(const Graph& g, const SegmentedMotif& motif, const EstimateConfig& cfg,
                                     LayerRun* run_out = nullptr) {
  cfg.check(motif.size());
  QueryLedger ledger(g.vertex_count());
  NeighborhoodOracle oracle(g, ledger);
  Rng rng(cfg.seed);

  double m = static_cast<double>(g.edge_count());
  if (cfg.edge_count_mode == EdgeCountMode::estimated)
    m = estimate_edge_count(g, ledger, cfg.edge_count, rng).m_hat;

  auto edges = simple_random_walk(g, ledger, cfg.walk, rng);
  LayerRun run = build_layers(oracle, motif, edges, cfg.layer_sizes, rng);
  EstimateResult res = detail::summarize(run, motif, m, cfg.walk.length, cfg.layer_sizes);
  res.oracle_calls = ledger.oracle_calls();
  res.queried_vertices = ledger.queried_vertex_count();
  res.edges_observed_fraction = edges_observed_fraction(ledger, g);
  if (run_out) *run_out = std::move(run);
  return res;
}

struct SampleSizeRecommendation {
  double walk_length_bound = 0;            // r~ bound
  std::vector<double> layer_bounds;        // l_3..l_k bounds
  std::size_t walk_length = 1;
  std::vector<std::size_t> layer_sizes;    // ceil of bounds, at least 1
};

// Sample sizes from the concentration analysis, natural log, with
// tau_mix = tau_rel = ceil(10 log2 n). Advisory only.
inline SampleSizeRecommendation recommend_sample_sizes(double n, double m, double alpha, int c, int k, double eps,
                                                       double t_guess, double fmax_guess) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error("epsilon must lie in (0, 1)");
  if (n <= 0 || m <= 0 || alpha <= 0 || t_guess <= 0 || fmax_guess <= 0 || c < 0 || k < 3)
    throw Error("sample-size recommendation needs positive inputs");
  const double log_n = std::log(n);
  const double tau = static_cast<double>(default_burn_in(static_cast<std::size_t>(n)));
  const double nc = std::pow(n, c);
  auto to_size = [](double x) {
    if (!(x >= 1.0)) return std::size_t{1};
    if (x >= 1e18) return std::size_t{1'000'000'000'000'000'000ull};
    return static_cast<std::size_t>(std::ceil(x));
  };

  SampleSizeRecommendation rec;
  rec.walk_length_bound = tau + tau * (log_n / (eps * eps)) * (fmax_guess * m / t_guess);
  rec.walk_length = to_size(rec.walk_length_bound);
  for (int i = 3; i <= k; ++i) {
    const double growth = std::pow((c + 1.0) * alpha, i - (c + 1));
    double bound;
    if (i < k)
      bound = std::pow(log_n, 3) / (std::pow(eps, 3) * std::pow(1.0 - eps, i)) * fmax_guess * 2.0 * m * nc * growth /
              t_guess;
    else
      bound = 3.0 * log_n * log_n / (std::pow(eps, 3) * std::pow(1.0 - eps, k)) * 2.0 * m * nc * growth / t_guess;
    rec.layer_bounds.push_back(bound);
    rec.layer_sizes.push_back(to_size(bound));
  }
  return rec;
}

}  // namespace crawlcount
