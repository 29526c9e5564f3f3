#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "crawlcount/error.hpp"
#include "crawlcount/estimator.hpp"
#include "crawlcount/exact.hpp"

namespace crawlcount {

struct LayerNiceness {
  int level = 0;
  double f_layer = 0;       // f_i(L_i), summed over the multiset
  double expected = 0;      // l_i / c_i * T
  double range_lo = 0;      // (1-eps)^i * expected
  double range_hi = 0;      // (1+eps)^i * expected
  bool nice_range = false;
  double ratio = 0;         // f_i(L_i) / D_i
  double ratio_floor = 0;   // (1-eps)^i * eps / ln n * T / D({seg_i})
  bool nice_ratio = false;

  bool nice() const { return nice_range && nice_ratio; }
};

// Exact quantities the niceness conditions compare against.
struct ExactReference {
  CountProfile profile;
  std::vector<double> seg_degree_totals;  // index i: D({seg_i}), levels 2..k
};

inline ExactReference make_exact_reference(const Graph& g, const SegmentedMotif& motif) {
  ExactReference ref;
  ref.profile = count_profile(g, motif);
  ref.seg_degree_totals.assign(static_cast<std::size_t>(motif.size() + 1), 0.0);
  for (int i = 2; i <= motif.size(); ++i) ref.seg_degree_totals[static_cast<std::size_t>(i)] = total_seg_degree(g, motif, i);
  return ref;
}

// Range and ratio conditions for each materialized layer L_2..L_{k-1}, using
// the run's realized c_i and D_i. Level 2 uses l_2 = r~ and c_2 = m.
inline std::vector<LayerNiceness> niceness_report(std::size_t n, const SegmentedMotif& motif, const LayerRun& run,
                                                  const EstimateResult& res, const ExactReference& ref, double eps) {
  const CountProfile& exact = ref.profile;
  if (exact.k != motif.size() || exact.f_tables.size() < static_cast<std::size_t>(motif.size()) ||
      ref.seg_degree_totals.size() < static_cast<std::size_t>(motif.size()))
    throw Error("niceness report needs the exact count profile of this pattern");
  if (!(eps > 0.0 && eps < 1.0)) throw Error("epsilon must lie in (0, 1)");
  const double T = static_cast<double>(exact.total);
  const double log_n = std::log(static_cast<double>(n));

  std::vector<LayerNiceness> out;
  for (const LayerState& layer : run.layers) {
    const int i = layer.level();
    const auto& diag = res.per_layer[static_cast<std::size_t>(i - 2)];
    LayerNiceness row;
    row.level = i;
    for (const Instance& member : layer.members()) row.f_layer += static_cast<double>(exact.f(member));

    const double l_i = static_cast<double>(diag.trials);
    const double c_i = diag.scaling;
    row.expected = c_i > 0 ? l_i / c_i * T : 0.0;
    row.range_lo = std::pow(1.0 - eps, i) * row.expected;
    row.range_hi = std::pow(1.0 + eps, i) * row.expected;
    row.nice_range = c_i > 0 ? (row.f_layer >= row.range_lo && row.f_layer <= row.range_hi) : T == 0;

    const double d_i = static_cast<double>(layer.total_degree());
    row.ratio = d_i > 0 ? row.f_layer / d_i : 0.0;
    if (T > 0) {
      const double total_degree = ref.seg_degree_totals[static_cast<std::size_t>(i)];
      row.ratio_floor = std::pow(1.0 - eps, i) * eps / log_n * T / total_degree;
      row.nice_ratio = d_i > 0 && row.ratio >= row.ratio_floor;
    } else {
      row.nice_ratio = true;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace crawlcount
