#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "crawlcount/error.hpp"
#include "crawlcount/estimator.hpp"
#include "crawlcount/exact.hpp"

namespace crawlcount {

struct ExperimentSpec {
  std::size_t repetitions = 100;
  std::vector<std::size_t> walk_schedule;           // r~ values
  std::optional<std::vector<std::size_t>> layer_sizes;  // l_3..l_k; nullopt = auto
  std::uint64_t base_seed = 1;
  std::optional<std::uint64_t> exact_count;         // user-supplied T
  std::optional<std::size_t> burn_in;
  EdgeCountMode edge_count_mode = EdgeCountMode::exact;
  EdgeCountConfig edge_count;
  bool lazy_walk = false;

  // Auto layer sizing.
  double epsilon = 0.5;
  std::optional<double> t_guess;
  double fmax_guess = 1.0;
  std::size_t layer_cap = 100'000;

  void check() const {
    if (repetitions < 1) throw Error("repetitions must be at least 1");
    if (walk_schedule.empty()) throw Error("walk-length schedule is empty");
  }
};

struct RunRecord {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t walk_len = 0;
  double estimate = 0;
  std::optional<std::uint64_t> exact;
  std::optional<double> rel_err_pct;  // (exact - estimate) * 100 / exact
  std::size_t oracle_calls = 0;
  double edges_observed_pct = 0;
  std::vector<std::string> warnings;
};

struct ScheduleSummary {
  std::size_t walk_len = 0;
  std::size_t runs = 0;
  double median_abs_rel_err_pct = 0;
  double q1_abs_rel_err_pct = 0;
  double q3_abs_rel_err_pct = 0;
  double median_estimate = 0;
  double median_edges_observed_pct = 0;
};

struct ExperimentResult {
  std::vector<std::size_t> layer_sizes;
  std::vector<RunRecord> runs;
  std::vector<ScheduleSummary> summary;
  std::vector<std::string> notes;
};

// Linear-interpolated quantile of an unsorted sample.
inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return std::nan("");
  std::sort(xs.begin(), xs.end());
  double pos = q * static_cast<double>(xs.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, xs.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return xs[lo] + (xs[hi] - xs[lo]) * frac;
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

inline double relative_error_pct(double exact, double estimate) { return (exact - estimate) * 100.0 / exact; }

namespace detail {

inline EstimateConfig run_config(const ExperimentSpec& spec, std::size_t walk_len,
                                 const std::vector<std::size_t>& layers, std::uint64_t seed) {
  EstimateConfig cfg;
  cfg.layer_sizes = layers;
  cfg.walk.length = walk_len;
  cfg.walk.burn_in = spec.burn_in;
  cfg.walk.lazy = spec.lazy_walk;
  cfg.edge_count_mode = spec.edge_count_mode;
  cfg.edge_count = spec.edge_count;
  cfg.edge_count.lazy = spec.lazy_walk;
  cfg.epsilon = spec.epsilon;
  cfg.seed = seed;
  return cfg;
}

// Layer sizes from the concentration bounds, with T guessed by a pilot run
// when not supplied. Capped at spec.layer_cap.
inline std::vector<std::size_t> auto_layer_sizes(const Graph& g, const SegmentedMotif& motif,
                                                 const ExperimentSpec& spec, std::vector<std::string>& notes) {
  const int k = motif.size();
  double t_guess = 0;
  if (spec.t_guess) {
    t_guess = *spec.t_guess;
  } else {
    std::size_t pilot_len = spec.walk_schedule.front();
    std::vector<std::size_t> pilot_layers(static_cast<std::size_t>(k - 2), pilot_len);
    std::uint64_t pilot_seed = spec.base_seed + spec.repetitions * spec.walk_schedule.size();
    t_guess = estimate_count(g, motif, run_config(spec, pilot_len, pilot_layers, pilot_seed)).estimate;
    notes.push_back(fmt::format("pilot T guess {:.4f} (seed {})", t_guess, pilot_seed));
  }
  if (!(t_guess > 0)) {
    t_guess = 1.0;
    notes.push_back("T guess was zero; using 1");
  }
  const double alpha = static_cast<double>(degeneracy(g).value);
  auto rec = recommend_sample_sizes(static_cast<double>(g.vertex_count()), static_cast<double>(g.edge_count()), alpha,
                                    motif.slack(), k, spec.epsilon, t_guess, spec.fmax_guess);
  std::vector<std::size_t> sizes;
  for (std::size_t l : rec.layer_sizes) {
    if (l > spec.layer_cap) notes.push_back(fmt::format("layer size {} capped at {}", l, spec.layer_cap));
    sizes.push_back(std::min(l, spec.layer_cap));
  }
  return sizes;
}

}  // namespace detail

// For each r~ in the schedule, `repetitions` independent runs with seed
// base_seed + run index and uniformly random start vertices.
inline ExperimentResult run_experiment(const Graph& g, const SegmentedMotif& motif, const ExperimentSpec& spec) {
  spec.check();
  ExperimentResult out;
  std::optional<std::uint64_t> exact = spec.exact_count;
  if (!exact) exact = exact_count(g, motif);

  out.layer_sizes = spec.layer_sizes ? *spec.layer_sizes : detail::auto_layer_sizes(g, motif, spec, out.notes);

  std::size_t run_index = 0;
  for (std::size_t walk_len : spec.walk_schedule) {
    std::vector<double> errs, ests, observed;
    for (std::size_t rep = 0; rep < spec.repetitions; ++rep, ++run_index) {
      const std::uint64_t seed = spec.base_seed + run_index;
      EstimateResult res = estimate_count(g, motif, detail::run_config(spec, walk_len, out.layer_sizes, seed));
      RunRecord rec;
      rec.run = run_index;
      rec.seed = seed;
      rec.walk_len = walk_len;
      rec.estimate = res.estimate;
      rec.exact = exact;
      if (*exact > 0) rec.rel_err_pct = relative_error_pct(static_cast<double>(*exact), res.estimate);
      rec.oracle_calls = res.oracle_calls;
      rec.edges_observed_pct = res.edges_observed_fraction * 100.0;
      rec.warnings = res.warnings;
      if (rec.rel_err_pct) errs.push_back(std::abs(*rec.rel_err_pct));
      ests.push_back(rec.estimate);
      observed.push_back(rec.edges_observed_pct);
      out.runs.push_back(std::move(rec));
    }
    ScheduleSummary s;
    s.walk_len = walk_len;
    s.runs = spec.repetitions;
    s.median_abs_rel_err_pct = median(errs);
    s.q1_abs_rel_err_pct = quantile(errs, 0.25);
    s.q3_abs_rel_err_pct = quantile(errs, 0.75);
    s.median_estimate = median(ests);
    s.median_edges_observed_pct = median(observed);
    out.summary.push_back(s);
  }
  return out;
}

inline constexpr const char* kRunCsvHeader =
    "run,seed,walk_len,estimate,exact,rel_err_pct,oracle_calls,edges_observed_pct,warnings";

inline std::string join_warnings(const std::vector<std::string>& ws) {
  std::string out;
  for (const auto& w : ws) out += (out.empty() ? "" : ";") + w;
  return out;
}

inline void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& runs) {
  os << kRunCsvHeader << '\n';
  for (const auto& r : runs) {
    os << fmt::format("{},{},{},{:.6f},{},{},{},{:.4f},{}\n", r.run, r.seed, r.walk_len, r.estimate,
                      r.exact ? std::to_string(*r.exact) : "", r.rel_err_pct ? fmt::format("{:.4f}", *r.rel_err_pct) : "",
                      r.oracle_calls, r.edges_observed_pct, join_warnings(r.warnings));
  }
}

inline void write_summary_csv(std::ostream& os, const std::vector<ScheduleSummary>& summary) {
  os << "walk_len,runs,median_abs_rel_err_pct,q1_abs_rel_err_pct,q3_abs_rel_err_pct,median_estimate,"
        "median_edges_observed_pct\n";
  for (const auto& s : summary)
    os << fmt::format("{},{},{:.4f},{:.4f},{:.4f},{:.6f},{:.4f}\n", s.walk_len, s.runs, s.median_abs_rel_err_pct,
                      s.q1_abs_rel_err_pct, s.q3_abs_rel_err_pct, s.median_estimate, s.median_edges_observed_pct);
}

}  // namespace crawlcount
