#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "crawlcount/error.hpp"
#include "crawlcount/estimator.hpp"
#include "crawlcount/exact.hpp"
#include "crawlcount/experiment.hpp"
#include "crawlcount/graph.hpp"
#include "crawlcount/pattern.hpp"
#include "crawlcount/random_walk.hpp"

namespace crawlcount::cli {

struct PatternOptions {
  std::string name = "g33";
  std::string file;
  std::optional<int> slack;
};

inline PatternWithOrder resolve_pattern(const PatternOptions& opt) {
  PatternWithOrder pw;
  if (!opt.file.empty()) {
    std::ifstream in(opt.file);
    if (!in) throw Error("cannot open pattern file " + opt.file);
    pw = load_pattern(in);
  } else {
    pw = builtin_pattern(opt.name);
  }
  if (opt.slack) pw.pattern.slack = *opt.slack;
  return pw;
}

inline Graph read_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open graph file " + path);
  return load_edge_list(in);
}

// "a,b,c" -> {a, b, c}
inline std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto v = detail::parse_int<std::size_t>(detail::trim(tok));
    if (!v) throw Error(std::string("bad ") + what + " entry '" + tok + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw Error(std::string("empty ") + what);
  return out;
}

inline std::string join_sizes(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t x : xs) out += (out.empty() ? "" : ";") + std::to_string(x);
  return out;
}

inline void add_pattern_flags(CLI::App& cmd, PatternOptions& opt) {
  auto* name = cmd.add_option("--pattern", opt.name, "builtin pattern: g33, g45, g46, g59, g510");
  auto* file = cmd.add_option("--pattern-file", opt.file, "pattern file");
  name->excludes(file);
  cmd.add_option("--c", opt.slack, "density slack override");
}

inline void print_exact(std::ostream& out, const Graph& g, const SegmentedMotif& motif) {
  CountProfile prof = count_profile(g, motif);
  out << "T=" << prof.total << '\n';
  out << "level,copies,f_max\n";
  for (int i = 2; i <= motif.size(); ++i) {
    std::uint64_t fmax = i < motif.size() ? prof.f_max_per_level[static_cast<std::size_t>(i)] : (prof.total ? 1 : 0);
    out << i << ',' << prof.per_level_counts[static_cast<std::size_t>(i)] << ',' << fmax << '\n';
  }
  out << "F_max=" << prof.f_max << '\n';
}

inline constexpr const char* kEstimateCsvHeader =
    "seed,walk_len,layers,successes,scaling,edge_count,estimate,oracle_calls,queried_vertices,edges_observed_pct,"
    "warnings";

inline void print_estimate_row(std::ostream& out, std::uint64_t seed, const EstimateResult& r) {
  out << kEstimateCsvHeader << '\n';
  out << fmt::format("{},{},{},{},{:.6f},{:.6f},{:.6f},{},{},{:.4f},{}\n", seed, r.walk_length,
                     join_sizes(r.layer_sizes), r.successes, r.scaling, r.edge_count, r.estimate, r.oracle_calls,
                     r.queried_vertices, r.edges_observed_fraction * 100.0, join_warnings(r.warnings));
}

inline void print_validation(std::ostream& out, const PatternWithOrder& pw) {
  const Pattern& p = pw.pattern;
  p.check();
  auto report = validate_segmentation(p, pw.segmentation);
  out << "k=" << p.size() << " edges=" << p.graph.edge_count() << " c=" << p.slack << '\n';
  out << "order=";
  for (std::size_t i = 0; i < pw.segmentation.order.size(); ++i) out << (i ? " " : "") << pw.segmentation.order[i];
  out << '\n';
  out << "min_c=" << report.min_slack << '\n';
  if (report.disconnected_level)
    out << "verdict=disconnected level " << *report.disconnected_level << '\n';
  else if (report.min_slack > p.slack)
    out << "verdict=needs c=" << report.min_slack << '\n';
  else
    out << "verdict=ok\n";
}

// Entry point shared by the tool and the tests. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimate clique and near-clique counts through a random-walk neighborhood oracle"};
  app.name("crawlcount");
  app.require_subcommand(1);

  std::string graph_path;
  PatternOptions pattern;
  std::uint64_t seed = 1;
  std::optional<std::size_t> burn_in;
  bool lazy = false;
  bool estimate_m = false;
  EdgeCountConfig ec;

  auto* exact_cmd = app.add_subcommand("exact", "exact count by enumeration");
  exact_cmd->add_option("--graph", graph_path, "edge-list file")->required();
  add_pattern_flags(*exact_cmd, pattern);

  std::size_t walk_len = 1000;
  std::string layers_text;
  std::optional<Vertex> start;
  auto* est_cmd = app.add_subcommand("estimate", "one estimate as a CSV row");
  est_cmd->add_option("--graph", graph_path, "edge-list file")->required();
  add_pattern_flags(*est_cmd, pattern);
  est_cmd->add_option("--walk-len", walk_len, "random-walk length r~");
  est_cmd->add_option("--layers", layers_text, "l_3,l_4,...,l_k")->required();
  est_cmd->add_option("--burn-in", burn_in, "burn-in steps (default ceil(10 log2 n))");
  est_cmd->add_option("--seed", seed, "RNG seed");
  est_cmd->add_option("--start", start, "start vertex (default uniform)");
  est_cmd->add_flag("--estimate-m", estimate_m, "estimate m by walk collisions");
  est_cmd->add_flag("--lazy-walk", lazy, "lazy random walk");
  est_cmd->add_option("--m-samples", ec.samples, "collision samples for --estimate-m");
  est_cmd->add_option("--m-gap", ec.gap, "walk steps between collision samples");

  std::string schedule_text;
  std::string out_path;
  std::size_t reps = 100;
  std::optional<std::uint64_t> exact_t;
  ExperimentSpec spec;
  auto* exp_cmd = app.add_subcommand("experiment", "repeated estimates over a walk-length schedule");
  exp_cmd->add_option("--graph", graph_path, "edge-list file")->required();
  add_pattern_flags(*exp_cmd, pattern);
  exp_cmd->add_option("--walk-len", schedule_text, "comma-separated r~ schedule")->required();
  exp_cmd->add_option("--layers", layers_text, "l_3,...,l_k or 'auto'")->required();
  exp_cmd->add_option("--reps", reps, "repetitions per walk length");
  exp_cmd->add_option("--seed", seed, "base seed; run j uses seed+j");
  exp_cmd->add_option("--out", out_path, "per-run CSV output")->required();
  exp_cmd->add_option("--exact", exact_t, "known exact count T (skips enumeration)");
  exp_cmd->add_option("--burn-in", burn_in, "burn-in steps");
  exp_cmd->add_flag("--estimate-m", estimate_m, "estimate m by walk collisions");
  exp_cmd->add_flag("--lazy-walk", lazy, "lazy random walk");
  exp_cmd->add_option("--m-samples", ec.samples, "collision samples for --estimate-m");
  exp_cmd->add_option("--m-gap", ec.gap, "walk steps between collision samples");
  exp_cmd->add_option("--eps", spec.epsilon, "target accuracy for --layers auto");
  exp_cmd->add_option("--t-guess", spec.t_guess, "T guess for --layers auto (default: pilot run)");
  exp_cmd->add_option("--layer-cap", spec.layer_cap, "upper bound on auto layer sizes");

  auto* val_cmd = app.add_subcommand("validate", "check a segmentation and report its minimal slack");
  add_pattern_flags(*val_cmd, pattern);

  auto* edge_cmd = app.add_subcommand("edgecount", "estimate m by counting walk-sample collisions");
  edge_cmd->add_option("--graph", graph_path, "edge-list file")->required();
  edge_cmd->add_option("--samples", ec.samples, "samples s");
  edge_cmd->add_option("--gap", ec.gap, "walk steps between samples");
  edge_cmd->add_option("--max-retries", ec.max_retries, "doublings of s when no collision occurs");
  edge_cmd->add_option("--seed", seed, "RNG seed");
  edge_cmd->add_option("--burn-in", burn_in, "burn-in steps");
  edge_cmd->add_flag("--lazy-walk", lazy, "lazy random walk");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*exact_cmd) {
      Graph g = read_graph(graph_path);
      SegmentedMotif motif(resolve_pattern(pattern));
      print_exact(out, g, motif);
    } else if (*est_cmd) {
      Graph g = read_graph(graph_path);
      SegmentedMotif motif(resolve_pattern(pattern));
      EstimateConfig cfg;
      cfg.layer_sizes = parse_size_list(layers_text, "layer list");
      cfg.walk.length = walk_len;
      cfg.walk.burn_in = burn_in;
      cfg.walk.start = start;
      cfg.walk.lazy = lazy;
      cfg.edge_count_mode = estimate_m ? EdgeCountMode::estimated : EdgeCountMode::exact;
      cfg.edge_count = ec;
      cfg.edge_count.burn_in = burn_in;
      cfg.edge_count.lazy = lazy;
      cfg.seed = seed;
      print_estimate_row(out, seed, estimate_count(g, motif, cfg));
    } else if (*exp_cmd) {
      Graph g = read_graph(graph_path);
      SegmentedMotif motif(resolve_pattern(pattern));
      spec.repetitions = reps;
      spec.walk_schedule = parse_size_list(schedule_text, "walk-length schedule");
      if (layers_text != "auto") spec.layer_sizes = parse_size_list(layers_text, "layer list");
      spec.base_seed = seed;
      spec.exact_count = exact_t;
      spec.burn_in = burn_in;
      spec.edge_count_mode = estimate_m ? EdgeCountMode::estimated : EdgeCountMode::exact;
      spec.edge_count = ec;
      spec.edge_count.burn_in = burn_in;
      spec.lazy_walk = lazy;
      ExperimentResult res = run_experiment(g, motif, spec);
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw Error("cannot write " + out_path);
      write_runs_csv(file, res.runs);
      file.close();
      if (!file) throw Error("write to " + out_path + " failed");
      out << "layers=" << join_sizes(res.layer_sizes) << '\n';
      for (const auto& note : res.notes) out << "note=" << note << '\n';
      write_summary_csv(out, res.summary);
    } else if (*val_cmd) {
      print_validation(out, resolve_pattern(pattern));
    } else if (*edge_cmd) {
      Graph g = read_graph(graph_path);
      QueryLedger ledger(g.vertex_count());
      ec.seed = seed;
      ec.burn_in = burn_in;
      ec.lazy = lazy;
      auto est = estimate_edge_count(g, ledger, ec);
      out << fmt::format("m_hat={:.6f}\nm={}\nsamples={}\ncollisions={}\nretries={}\noracle_calls={}\n", est.m_hat,
                         g.edge_count(), est.samples, est.collisions, est.retries, ledger.oracle_calls());
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace crawlcount::cli
