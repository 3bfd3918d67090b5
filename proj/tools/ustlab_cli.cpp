// Command line front end: graph generation, tree sampling, spectral reports,
// Cheeger comparisons, the decomposition pipeline, bubble-sum tail checks,
// diameter scaling, and the tree-path experiment. Flags override --config.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ustlab.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string config_path;
  std::string family;
  std::vector<int> n;
  double delta = 0.0, eps = 0.0, beta = 0.0, p = 0.0, probe_c = 0.0;
  int trials = 0, threads = 0, probe_trials = 0;
  std::uint64_t seed = 0;
  std::string out, format, graph_file;

  CLI::Option* o_family = nullptr;
  CLI::Option* o_n = nullptr;
  CLI::Option* o_delta = nullptr;
  CLI::Option* o_eps = nullptr;
  CLI::Option* o_beta = nullptr;
  CLI::Option* o_p = nullptr;
  CLI::Option* o_trials = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_threads = nullptr;
  CLI::Option* o_out = nullptr;
  CLI::Option* o_format = nullptr;
  CLI::Option* o_graph_file = nullptr;
  CLI::Option* o_probe_c = nullptr;
  CLI::Option* o_probe_trials = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file; explicit flags override it");
  o.o_family = cmd->add_option(
      "--family", o.family,
      "complete | two-cliques-bridge | dense-gnp | complete-bipartite | star | file");
  o.o_n = cmd->add_option("--n", o.n, "vertex counts (repeat or comma separate)")->delimiter(',');
  o.o_delta = cmd->add_option("--delta", o.delta, "min-degree fraction delta");
  o.o_eps = cmd->add_option("--eps", o.eps, "decomposition epsilon");
  o.o_beta = cmd->add_option("--beta", o.beta, "decomposition beta (default n^1.5)");
  o.o_p = cmd->add_option("--p", o.p, "dense-gnp edge probability");
  o.o_trials = cmd->add_option("--trials", o.trials, "Monte Carlo trials");
  o.o_seed = cmd->add_option("--seed", o.seed, "master seed (required for randomized runs)");
  o.o_threads = cmd->add_option("--threads", o.threads, "worker threads");
  o.o_out = cmd->add_option("--out", o.out, "output path (default stdout)");
  o.o_format = cmd->add_option("--format", o.format, "csv | json")
                   ->check(CLI::IsMember({"csv", "json"}));
  o.o_graph_file = cmd->add_option("--graph-file", o.graph_file, "input graph for family=file");
  o.o_probe_c = cmd->add_option("--probe-c", o.probe_c, "stay-probe horizon constant");
  o.o_probe_trials = cmd->add_option("--probe-trials", o.probe_trials, "stay-probe trials per start");
}

ustlab::ExperimentConfig resolve(const CommonOpts& o) {
  ustlab::ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open config file " + o.config_path);
    json j;
    in >> j;
    cfg = ustlab::config_from_json(j);
  }
  if (o.o_family->count()) cfg.family = o.family;
  if (o.o_n->count()) cfg.n_list = o.n;
  if (o.o_delta->count()) {
    cfg.delta = o.delta;
    cfg.delta_given = true;
  }
  if (o.o_eps->count()) cfg.eps = o.eps;
  if (o.o_beta->count()) cfg.beta = o.beta;
  if (o.o_p->count()) cfg.gnp_p = o.p;
  if (o.o_trials->count()) cfg.trials = o.trials;
  if (o.o_seed->count()) {
    cfg.seed = o.seed;
    cfg.seeded = true;
  }
  if (o.o_threads->count()) cfg.threads = o.threads;
  if (o.o_out->count()) cfg.out = o.out;
  if (o.o_format->count()) cfg.format = o.format;
  if (o.o_graph_file->count()) cfg.file_path = o.graph_file;
  if (o.o_probe_c->count()) cfg.probe_c = o.probe_c;
  if (o.o_probe_trials->count()) cfg.probe_trials = o.probe_trials;
  return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + out_path);
  out << text;
}

std::string tables_csv(const std::vector<const ustlab::Table*>& tables) {
  std::string text;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    text += ustlab::table_csv(*tables[i], i == 0);
    if (i + 1 < tables.size()) text += "\n";
  }
  return text;
}

std::string tables_json(const std::vector<const ustlab::Table*>& tables, json extra = {}) {
  json doc;
  doc["schema"] = "ustlab/1";
  for (const ustlab::Table* t : tables) doc["tables"][t->name] = ustlab::table_json(*t);
  for (auto& [key, value] : extra.items()) doc[key] = value;
  return doc.dump(2) + "\n";
}

void emit_tables(const ustlab::ExperimentConfig& cfg,
                 const std::vector<const ustlab::Table*>& tables, json extra = {}) {
  emit(cfg.format == "json" ? tables_json(tables, std::move(extra)) : tables_csv(tables), cfg.out);
}

int first_n(const ustlab::ExperimentConfig& cfg) {
  if (cfg.n_list.size() != 1)
    throw std::invalid_argument("this subcommand takes exactly one --n value");
  return cfg.n_list[0];
}

ustlab::Graph build_one(const ustlab::ExperimentConfig& cfg, double min_degree_frac) {
  ustlab::RngStream gen(
      ustlab::RngStream::derive(cfg.seed, 1).seed());  // matches the experiment gen role
  if (ustlab::family_is_random(cfg.family) && !cfg.seeded)
    throw std::invalid_argument("--seed is required for randomized families");
  return ustlab::gen_constrained(ustlab::family_spec(cfg, first_n(cfg)), min_degree_frac,
                                 cfg.seeded ? &gen : nullptr);
}

json condition_json(const std::vector<ustlab::ConditionRecord>& conditions) {
  json out = json::object();
  for (const auto& c : conditions)
    out[c.name] = {{"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}};
  return out;
}

int cmd_gen(const ustlab::ExperimentConfig& cfg) {
  const ustlab::Graph g = build_one(cfg, cfg.delta_given ? cfg.delta : 0.0);
  if (cfg.format == "json")
    emit(ustlab::graph_to_json(g).dump(2) + "\n", cfg.out);
  else
    emit(ustlab::to_edge_list(g), cfg.out);
  return 0;
}

int cmd_sample(const ustlab::ExperimentConfig& cfg, int path_u, int path_v, bool emit_trees) {
  if (!cfg.seeded) throw std::invalid_argument("sample: --seed is required");
  const ustlab::Graph g = build_one(cfg, 0.0);
  const bool with_path = path_u >= 0 && path_v >= 0;
  ustlab::VertexSet block(g.n());
  if (with_path && cfg.delta_given) {
    const auto gd = ustlab::good_decomposition(g, cfg.eps, cfg.delta, cfg.beta, false);
    block = gd.partition.block(gd.partition.block_of[path_u]);
  }

  ustlab::Table table;
  table.name = "sample";
  table.columns = {"trial", "seed", "diameter", "path_len", "contained_flag"};
  json trees = json::array();
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const std::uint64_t seed = ustlab::RngStream::derive(cfg.seed, trial).seed();
    ustlab::RngStream s(seed);
    const ustlab::SpanningTree t = ustlab::wilson(g, 0, s);
    int path_len = -1, contained = -1;
    if (with_path) {
      const std::vector<int> path = ustlab::tree_path(t, path_u, path_v);
      path_len = static_cast<int>(path.size()) - 1;
      if (cfg.delta_given) {
        contained = 1;
        for (int v : path) contained = contained && block.contains(v);
      }
    }
    table.rows.push_back({std::to_string(trial), ustlab::fmt_u64(seed),
                          std::to_string(ustlab::tree_diameter(t)), std::to_string(path_len),
                          std::to_string(contained)});
    if (emit_trees) trees.push_back({{"trial", trial}, {"root", t.root}, {"parent", t.parent}});
  }
  json extra;
  if (emit_trees) extra["trees"] = std::move(trees);
  emit_tables(cfg, {&table}, std::move(extra));
  return 0;
}

int cmd_spectral(const ustlab::ExperimentConfig& cfg) {
  const ustlab::Graph g = build_one(cfg, 0.0);
  const ustlab::Network net = ustlab::Network::from_graph(g);
  const ustlab::SpectralSummary sp = ustlab::spectrum(net);

  json report;
  report["schema"] = "ustlab/1";
  report["n"] = g.n();
  report["gap"] = sp.gap;
  report["lambda2"] = sp.lambda2();
  const int k = std::min<int>(10, static_cast<int>(sp.eigenvalues.size()));
  report["lambda_k_list"] = std::vector<double>(sp.eigenvalues.begin(), sp.eigenvalues.begin() + k);
  report["trace_p2"] = sp.trace_p2;

  ustlab::Partition part = ustlab::Partition::trivial(g.n());
  if (cfg.delta_given && g.min_degree() >= cfg.delta * g.n() - 1e-9)
    part = ustlab::good_decomposition(g, cfg.eps, cfg.delta, cfg.beta, false).partition;
  report["bounds"]["jsvt"] = ustlab::jsvt_lower_bound(net, part);
  report["bounds"]["path_method"] = ustlab::path_method_bound(net);
  if (const auto params = ustlab::decomposition_bound_params(g, part))
    report["bounds"]["decomposition"] =
        ustlab::decomposition_gap_bound(g, part, params->a, params->b, params->c);
  else
    report["bounds"]["decomposition"] = nullptr;
  emit(report.dump(2) + "\n", cfg.out);
  return 0;
}

int cmd_cheeger(const ustlab::ExperimentConfig& cfg) {
  const ustlab::CheegerGapResult res = ustlab::run_cheeger_vs_gap(cfg);
  emit_tables(cfg, {&res.table});
  return 0;
}

int cmd_decompose(const ustlab::ExperimentConfig& cfg) {
  const ustlab::Graph g = build_one(cfg, cfg.delta);
  const ustlab::GoodDecomposition gd =
      ustlab::good_decomposition(g, cfg.eps, cfg.delta, cfg.beta, false);

  if (cfg.format == "csv") {
    ustlab::Table table;
    table.name = "decompose_audit";
    table.columns = {"condition", "value", "threshold", "pass"};
    for (const auto& c : gd.audit.conditions)
      table.rows.push_back(
          {c.name, ustlab::fmt_double(c.value), ustlab::fmt_double(c.threshold), c.pass ? "1" : "0"});
    emit_tables(cfg, {&table});
  } else {
    json report;
    report["schema"] = "ustlab/1";
    report["k"] = gd.partition.k;
    report["theta"] = gd.theta;
    report["blocks"] = gd.partition.block_sizes();
    report["audit"] = condition_json(gd.audit.conditions);
    report["negligible_edges"] = gd.negligible_edges;
    report["evil_count"] = gd.evil_count;
    report["coarsen_merges"] = gd.coarsen_merges;
    report["eps_warning"] = gd.eps_warning;
    emit(report.dump(2) + "\n", cfg.out);
  }
  return gd.audit.all_pass ? 0 : 1;
}

int cmd_bubble(const ustlab::ExperimentConfig& cfg) {
  const ustlab::BubbleTailResult res = ustlab::run_bubble_and_tail(cfg);
  emit_tables(cfg, {&res.table, &res.summary});
  return 0;
}

int cmd_scaling(const ustlab::ExperimentConfig& cfg) {
  const ustlab::ScalingResult res = ustlab::run_diameter_scaling(cfg);
  emit_tables(cfg, {&res.table, &res.summary}, json{{"slope", res.slope}});
  return 0;
}

int cmd_paths(const ustlab::ExperimentConfig& cfg) {
  const ustlab::PathExperimentResult res = ustlab::run_path_experiment(cfg);
  emit_tables(cfg, {&res.table, &res.summary},
              json{{"theta", res.theta}, {"min_event_freq", res.min_event_freq}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uniform spanning tree and spectral decomposition toolkit"};
  app.require_subcommand(1);

  CommonOpts gen_o, sample_o, spectral_o, cheeger_o, decompose_o, bubble_o, scaling_o, paths_o;
  int path_u = -1, path_v = -1;
  bool emit_trees = false;

  CLI::App* c_gen = app.add_subcommand("gen", "emit a generator-family graph (edge list or JSON)");
  add_common(c_gen, gen_o);
  CLI::App* c_sample = app.add_subcommand(
      "sample", "sample spanning trees; CSV: trial,seed,diameter,path_len,contained_flag");
  add_common(c_sample, sample_o);
  c_sample->add_option("--path-u", path_u, "tree path endpoint (optional)");
  c_sample->add_option("--path-v", path_v, "tree path endpoint (optional)");
  c_sample->add_flag("--emit-trees", emit_trees, "include parent arrays (json format)");
  CLI::App* c_spectral =
      app.add_subcommand("spectral", "gap, eigenvalues, trace identity, lower bounds (JSON)");
  add_common(c_spectral, spectral_o);
  CLI::App* c_cheeger = app.add_subcommand(
      "cheeger", "Cheeger constant vs gap; CSV: family,n,method,phi,gamma,ratio,...");
  add_common(c_cheeger, cheeger_o);
  CLI::App* c_decompose = app.add_subcommand(
      "decompose", "run the decomposition pipeline; nonzero exit if the audit fails");
  add_common(c_decompose, decompose_o);
  CLI::App* c_bubble = app.add_subcommand(
      "bubble", "bubble sums and contracted-tree diameter tails vs the certified bound");
  add_common(c_bubble, bubble_o);
  CLI::App* c_scaling =
      app.add_subcommand("scaling", "tree diameter medians across n with fitted exponent");
  add_common(c_scaling, scaling_o);
  CLI::App* c_paths = app.add_subcommand(
      "paths", "tree-path length and containment statistics for selector endpoints");
  add_common(c_paths, paths_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_gen->parsed()) return cmd_gen(resolve(gen_o));
    if (c_sample->parsed()) return cmd_sample(resolve(sample_o), path_u, path_v, emit_trees);
    if (c_spectral->parsed()) return cmd_spectral(resolve(spectral_o));
    if (c_cheeger->parsed()) return cmd_cheeger(resolve(cheeger_o));
    if (c_decompose->parsed()) return cmd_decompose(resolve(decompose_o));
    if (c_bubble->parsed()) return cmd_bubble(resolve(bubble_o));
    if (c_scaling->parsed()) return cmd_scaling(resolve(scaling_o));
    if (c_paths->parsed()) return cmd_paths(resolve(paths_o));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
