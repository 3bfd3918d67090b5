#pragma once

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ustlab/decomposition.hpp"
#include "ustlab/estimators.hpp"
#include "ustlab/generators.hpp"
#include "ustlab/network.hpp"
#include "ustlab/spectral.hpp"
#include "ustlab/tree.hpp"
#include "ustlab/ust.hpp"

namespace ustlab {

struct ExperimentConfig {
  std::string family = "complete";
  std::vector<int> n_list;
  double delta = 0.3;
  bool delta_given = false;  // lets gen skip the min-degree constraint when unset
  double eps = 0.2;
  double beta = -1.0;  // <= 0 selects n^{3/2} per instance
  double gnp_p = 0.9;
  std::string file_path;
  int trials = 100;
  std::uint64_t seed = 0;
  bool seeded = false;
  int threads = 1;
  double probe_c = 2.0;
  int probe_trials = 200;
  std::string out;            // empty: stdout
  std::string format = "csv"; // csv | json
};

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  static const std::vector<std::string> known = {
      "family", "n",     "delta",   "eps",  "beta",    "p",           "path",
      "trials", "seed",  "threads", "out",  "format",  "probe_c",     "probe_trials"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  cfg.family = j.value("family", cfg.family);
  if (j.contains("n")) {
    if (j["n"].is_array())
      cfg.n_list = j["n"].get<std::vector<int>>();
    else
      cfg.n_list = {j["n"].get<int>()};
  }
  if (j.contains("delta")) {
    cfg.delta = j["delta"].get<double>();
    cfg.delta_given = true;
  }
  cfg.eps = j.value("eps", cfg.eps);
  cfg.beta = j.value("beta", cfg.beta);
  cfg.gnp_p = j.value("p", cfg.gnp_p);
  cfg.file_path = j.value("path", cfg.file_path);
  cfg.trials = j.value("trials", cfg.trials);
  if (j.contains("seed")) {
    cfg.seed = j["seed"].get<std::uint64_t>();
    cfg.seeded = true;
  }
  cfg.threads = j.value("threads", cfg.threads);
  cfg.out = j.value("out", cfg.out);
  cfg.format = j.value("format", cfg.format);
  cfg.probe_c = j.value("probe_c", cfg.probe_c);
  cfg.probe_trials = j.value("probe_trials", cfg.probe_trials);
  return cfg;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["family"] = cfg.family;
  j["n"] = cfg.n_list;
  j["delta"] = cfg.delta;
  j["eps"] = cfg.eps;
  j["beta"] = cfg.beta;
  j["p"] = cfg.gnp_p;
  if (!cfg.file_path.empty()) j["path"] = cfg.file_path;
  j["trials"] = cfg.trials;
  if (cfg.seeded) j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["probe_c"] = cfg.probe_c;
  j["probe_trials"] = cfg.probe_trials;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  j["format"] = cfg.format;
  return j;
}

inline FamilySpec family_spec(const ExperimentConfig& cfg, int n) {
  FamilySpec spec;
  spec.family = cfg.family;
  spec.n = n;
  spec.p = cfg.gnp_p;
  spec.path = cfg.file_path;
  return spec;
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string fmt_u64(std::uint64_t x) { return std::to_string(x); }

// Data rows are byte-reproducible for a fixed config + seed; the timestamp
// lives in a comment line so replay checks can drop it.
inline std::string table_csv(const Table& t, bool timestamp_comment = true) {
  std::string out;
  if (timestamp_comment) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out += "# ";
    out += t.name;
    out += " generated ";
    out += buf;
    out += "\n";
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::json table_json(const Table& t) {
  nlohmann::json j;
  j["schema"] = "ustlab/1";
  j["table"] = t.name;
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  return j;
}

namespace detail {

constexpr std::uint64_t kGenRole = 1;
constexpr std::uint64_t kProbeRole = 2;
constexpr std::uint64_t kTrialRole = 3;
constexpr std::uint64_t kAssemblyRole = 4;

inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t role, std::uint64_t index) {
  return RngStream::derive(RngStream::derive(master, role).seed(), index).seed();
}

inline std::uint64_t trial_seed(std::uint64_t master, int instance, int trial) {
  return sub_seed(master, kTrialRole,
                  (static_cast<std::uint64_t>(instance) << 32) | static_cast<std::uint64_t>(trial));
}

// Deterministic by construction: results land in slots indexed by item, and
// every item's seed comes from its index, never from scheduling.
template <class Fn>
void parallel_for(int total, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || total <= 1) {
    for (int i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline double median_sorted(const std::vector<double>& xs) {
  const std::size_t k = xs.size();
  if (k == 0) return std::numeric_limits<double>::quiet_NaN();
  return k % 2 ? xs[k / 2] : 0.5 * (xs[k / 2 - 1] + xs[k / 2]);
}

inline double least_squares_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(pts.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

inline Graph build_instance(const ExperimentConfig& cfg, int n, int instance) {
  RngStream gen(sub_seed(cfg.seed, kGenRole, static_cast<std::uint64_t>(instance)));
  const double frac = family_is_random(cfg.family) ? cfg.delta : 0.0;
  return gen_constrained(family_spec(cfg, n), frac, &gen);
}

inline void require_seed(const ExperimentConfig& cfg, const char* what) {
  if (!cfg.seeded) throw std::invalid_argument(std::string(what) + ": master seed is required");
}

}  // namespace detail

struct ScalingResult {
  Table table;    // per-trial rows
  Table summary;  // per-n medians and quantiles
  std::vector<std::pair<int, double>> medians;
  double slope = 0.0;  // of log median vs log n
};

// Sample tree diameters per (family, n) and fit the growth exponent.
inline ScalingResult run_diameter_scaling(const ExperimentConfig& cfg) {
  detail::require_seed(cfg, "run_diameter_scaling");
  if (cfg.n_list.empty()) throw std::invalid_argument("run_diameter_scaling: empty n list");
  if (cfg.trials < 1) throw std::invalid_argument("run_diameter_scaling: trials >= 1");

  ScalingResult res;
  res.table.name = "scaling";
  res.table.columns = {"family", "n", "trial", "seed", "diameter"};
  res.summary.name = "scaling_summary";
  res.summary.columns = {"family", "n", "trials", "median", "q10", "q90"};

  std::vector<std::pair<double, double>> log_pts;
  for (std::size_t inst = 0; inst < cfg.n_list.size(); ++inst) {
    const int n = cfg.n_list[inst];
    const Graph g = detail::build_instance(cfg, n, static_cast<int>(inst));
    std::vector<int> diam(cfg.trials, 0);
    detail::parallel_for(cfg.trials, cfg.threads, [&](int trial) {
      RngStream s(detail::trial_seed(cfg.seed, static_cast<int>(inst), trial));
      diam[trial] = tree_diameter(wilson(g, 0, s));
    });
    std::vector<double> sorted(diam.begin(), diam.end());
    std::sort(sorted.begin(), sorted.end());
    for (int trial = 0; trial < cfg.trials; ++trial)
      res.table.rows.push_back({cfg.family, std::to_string(n), std::to_string(trial),
                                fmt_u64(detail::trial_seed(cfg.seed, static_cast<int>(inst), trial)),
                                std::to_string(diam[trial])});
    const double med = detail::median_sorted(sorted);
    const double q10 = sorted[static_cast<std::size_t>(0.1 * (sorted.size() - 1))];
    const double q90 = sorted[static_cast<std::size_t>(0.9 * (sorted.size() - 1))];
    res.summary.rows.push_back({cfg.family, std::to_string(n), std::to_string(cfg.trials),
                                fmt_double(med), fmt_double(q10), fmt_double(q90)});
    res.medians.emplace_back(n, med);
    if (med > 0) log_pts.emplace_back(std::log(static_cast<double>(n)), std::log(med));
  }
  res.slope = detail::least_squares_slope(log_pts);
  res.summary.columns.push_back("slope");
  for (auto& row : res.summary.rows) row.push_back(fmt_double(res.slope));
  return res;
}

struct CheegerGapResult {
  Table table;
};

// Exact gap against exact or sweep Cheeger constant, with the two-sided
// quadratic bounds and the dense lower-bound flag per row.
inline CheegerGapResult run_cheeger_vs_gap(const ExperimentConfig& cfg) {
  if (cfg.n_list.empty()) throw std::invalid_argument("run_cheeger_vs_gap: empty n list");
  if (family_is_random(cfg.family)) detail::require_seed(cfg, "run_cheeger_vs_gap");

  CheegerGapResult res;
  res.table.name = "cheeger_vs_gap";
  res.table.columns = {"family",   "n",        "method", "phi",     "gamma",
                       "ratio",    "eq12_pass", "mindeg_frac", "thm_bound", "thm_pass"};
  for (std::size_t inst = 0; inst < cfg.n_list.size(); ++inst) {
    const int n = cfg.n_list[inst];
    const Graph g = detail::build_instance(cfg, n, static_cast<int>(inst));
    const double gamma = spectrum(g).gap;
    const bool exact = n <= 24;
    const CheegerCut cut = exact ? cheeger_exact(g) : cheeger_sweep(g);
    const double phi = cut.phi;
    const bool eq12 = phi * phi / 2.0 - 1e-9 <= gamma && gamma <= 2.0 * phi + 1e-9;
    const double mindeg_frac = static_cast<double>(g.min_degree()) / n;
    const double thm_bound = std::pow(cfg.delta, 19) / std::pow(2.0, 34) * phi;
    res.table.rows.push_back({cfg.family, std::to_string(n), exact ? "exact" : "sweep",
                              fmt_double(phi), fmt_double(gamma), fmt_double(gamma / phi),
                              eq12 ? "1" : "0", fmt_double(mindeg_frac), fmt_double(thm_bound),
                              gamma >= thm_bound - 1e-12 ? "1" : "0"});
  }
  return res;
}

struct PathExperimentResult {
  Table table;    // per (trial, block) rows
  Table summary;  // per block
  double theta = 0.0;
  double min_event_freq = 1.0;
};

// Sample trees, measure the selector endpoints' tree path per block: length
// window eps^8 theta sqrt(n) <= |path| <= sqrt(n)/(theta eps^8) and
// containment in the block.
inline PathExperimentResult run_path_experiment(const ExperimentConfig& cfg) {
  detail::require_seed(cfg, "run_path_experiment");
  if (cfg.n_list.size() != 1)
    throw std::invalid_argument("run_path_experiment: exactly one n per run");
  const int n = cfg.n_list[0];
  const Graph g = detail::build_instance(cfg, n, 0);
  const GoodDecomposition gd = good_decomposition(g, cfg.eps, cfg.delta, cfg.beta);

  PathExperimentResult res;
  res.theta = gd.theta;
  res.table.name = "paths";
  res.table.columns = {"n", "block", "trial", "seed", "path_len", "contained", "in_window", "event"};
  res.summary.name = "paths_summary";
  res.summary.columns = {"n",       "block",     "v1",        "v2",        "trials",
                         "freq_event", "freq_contained", "mean_path_len", "len_lo", "len_hi"};

  const int k = gd.partition.k;
  std::vector<VertexSet> blocks = gd.partition.blocks();
  std::vector<std::pair<int, int>> endpoints(k);
  for (int i = 0; i < k; ++i) {
    RngStream probe_rng(detail::sub_seed(cfg.seed, detail::kProbeRole, static_cast<std::uint64_t>(i)));
    const BlockStayProbe probe = probe_stay_in_block(g, gd, i, cfg.probe_c, cfg.probe_trials, probe_rng);
    endpoints[i] = select_path_endpoints(probe);
  }

  const double len_lo = std::pow(cfg.eps, 8) * gd.theta * std::sqrt(static_cast<double>(n));
  const double len_hi = std::sqrt(static_cast<double>(n)) / (gd.theta * std::pow(cfg.eps, 8));

  struct TrialRow {
    int len;
    bool contained, in_window, event;
  };
  std::vector<std::vector<TrialRow>> out(cfg.trials, std::vector<TrialRow>(k));
  detail::parallel_for(cfg.trials, cfg.threads, [&](int trial) {
    RngStream s(detail::trial_seed(cfg.seed, 0, trial));
    const SpanningTree tree = wilson(g, 0, s);
    for (int i = 0; i < k; ++i) {
      const std::vector<int> path = tree_path(tree, endpoints[i].first, endpoints[i].second);
      TrialRow& row = out[trial][i];
      row.len = static_cast<int>(path.size()) - 1;  // edge count
      row.contained = true;
      for (int v : path) row.contained = row.contained && blocks[i].contains(v);
      row.in_window = len_lo <= row.len && row.len <= len_hi;
      row.event = row.contained && row.in_window;
    }
  });

  for (int i = 0; i < k; ++i) {
    long long events = 0, contained = 0, len_sum = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const TrialRow& row = out[trial][i];
      res.table.rows.push_back({std::to_string(n), std::to_string(i), std::to_string(trial),
                                fmt_u64(detail::trial_seed(cfg.seed, 0, trial)),
                                std::to_string(row.len), row.contained ? "1" : "0",
                                row.in_window ? "1" : "0", row.event ? "1" : "0"});
      events += row.event;
      contained += row.contained;
      len_sum += row.len;
    }
    const double freq = static_cast<double>(events) / cfg.trials;
    res.summary.rows.push_back(
        {std::to_string(n), std::to_string(i), std::to_string(endpoints[i].first),
         std::to_string(endpoints[i].second), std::to_string(cfg.trials), fmt_double(freq),
         fmt_double(static_cast<double>(contained) / cfg.trials),
         fmt_double(static_cast<double>(len_sum) / cfg.trials), fmt_double(len_lo),
         fmt_double(len_hi)});
    res.min_event_freq = std::min(res.min_event_freq, freq);
  }
  return res;
}

struct BubbleTailResult {
  Table table;    // per-ell tail rows
  Table summary;  // per-instance bubble/constant summary
  bool all_pass = true;
};

// Assemble a kill set from one sampled tree's per-block selector paths, then
// compare the empirical diameter tail of the contracted-tree samples against
// the certified bound at every level.
inline BubbleTailResult run_bubble_and_tail(const ExperimentConfig& cfg) {
  detail::require_seed(cfg, "run_bubble_and_tail");
  if (cfg.n_list.empty()) throw std::invalid_argument("run_bubble_and_tail: empty n list");

  BubbleTailResult res;
  res.table.name = "bubble_tail";
  res.table.columns = {"n", "ell", "empirical", "bound", "pass"};
  res.summary.name = "bubble_summary";
  res.summary.columns = {"n",   "w_size", "bubble_value", "bubble_upper", "rho",
                         "t_max", "c3",     "trials",       "max_diam"};

  for (std::size_t inst = 0; inst < cfg.n_list.size(); ++inst) {
    const int n = cfg.n_list[inst];
    const Graph g = detail::build_instance(cfg, n, static_cast<int>(inst));
    const GoodDecomposition gd = good_decomposition(g, cfg.eps, cfg.delta, cfg.beta);
    const int k = gd.partition.k;

    RngStream assembly(
        detail::sub_seed(cfg.seed, detail::kAssemblyRole, static_cast<std::uint64_t>(inst)));
    const SpanningTree seed_tree = wilson(g, 0, assembly);
    VertexSet w(g.n());
    for (int i = 0; i < k; ++i) {
      RngStream probe_rng(detail::sub_seed(cfg.seed, detail::kProbeRole,
                                           (static_cast<std::uint64_t>(inst) << 8) | i));
      const BlockStayProbe probe =
          probe_stay_in_block(g, gd, i, cfg.probe_c, cfg.probe_trials, probe_rng);
      const auto [v1, v2] = select_path_endpoints(probe);
      for (int v : tree_path(seed_tree, v1, v2)) w.add(v);
    }

    const BubbleSumResult bubble = bubble_sum(Network::from_graph(g), w);
    int max_deg = 0;
    for (int v = 0; v < g.n(); ++v) max_deg = std::max(max_deg, g.degree(v));
    const double d_ratio = static_cast<double>(max_deg) / g.min_degree();
    const double c3 = w.size() == g.n() ? std::numeric_limits<double>::infinity()
                                        : mns_c3(d_ratio, bubble.upper());

    const ContractionMap cm = contract(g, {w});
    std::vector<int> diam(cfg.trials, 0);
    detail::parallel_for(cfg.trials, cfg.threads, [&](int trial) {
      RngStream s(detail::trial_seed(cfg.seed, static_cast<int>(inst), trial));
      diam[trial] = tree_diameter(wilson(cm.contracted, 0, s));
    });
    const int max_diam = *std::max_element(diam.begin(), diam.end());
    for (int ell = 1; ell <= std::max(1, max_diam); ++ell) {
      long long tail_count = 0;
      for (int d : diam) tail_count += d >= ell;
      const double empirical = static_cast<double>(tail_count) / cfg.trials;
      const double bound = diameter_tail_bound(c3, w.size(), ell);
      const bool pass = empirical <= bound + 1e-12;
      res.all_pass = res.all_pass && pass;
      res.table.rows.push_back({std::to_string(n), std::to_string(ell), fmt_double(empirical),
                                fmt_double(bound), pass ? "1" : "0"});
    }
    res.summary.rows.push_back({std::to_string(n), std::to_string(w.size()),
                                fmt_double(bubble.value), fmt_double(bubble.upper()),
                                fmt_double(bubble.rho), std::to_string(bubble.t_max),
                                fmt_double(c3), std::to_string(cfg.trials),
                                std::to_string(max_diam)});
  }
  return res;
}

}  // namespace ustlab
