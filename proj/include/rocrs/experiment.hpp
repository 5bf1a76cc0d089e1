// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ROCRS_EXPERIMENT_HPP
#define ROCRS_EXPERIMENT_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rocrs/auction.hpp"
#include "rocrs/crs.hpp"
#include "rocrs/diagnostics.hpp"
#include "rocrs/generators.hpp"
#include "rocrs/io.hpp"
#include "rocrs/probing.hpp"
#include "rocrs/relaxations.hpp"
#include "rocrs/stats.hpp"
#include "rocrs/submodular.hpp"

namespace rocrs {

enum class ExperimentKind { kCrs, kAuction, kPacking, kProbing, kGreedy, kDiagnostics };

inline ExperimentKind parse_kind(const std::string& s) {
  if (s == "crs") return ExperimentKind::kCrs;
  if (s == "auction") return ExperimentKind::kAuction;
  if (s == "packing") return ExperimentKind::kPacking;
  if (s == "probing") return ExperimentKind::kProbing;
  if (s == "greedy") return ExperimentKind::kGreedy;
  if (s == "diagnostics") return ExperimentKind::kDiagnostics;
  throw InputError("unknown experiment kind '" + s + "'");
}

inline std::string kind_name(ExperimentKind k) {
  static const char* names[] = {"crs", "auction", "packing", "probing", "greedy", "diagnostics"};
  return names[static_cast<int>(k)];
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kCrs;
  std::string instance;     // instance file (crs, auction, packing, probing, diagnostics)
  std::string oracle;       // greedy: oracle file
  std::string constraints;  // greedy: constraint file
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  double eps = 0.05;
  int jobs = 1;
  double T = 1.0;      // greedy horizon
  int steps = 100;     // greedy steps
  bool filter = true;  // probing: marginal-gain filter
  std::uint64_t trace_trials = 0;  // diagnostics: traces dumped for the first trials

  void validate() const {
    if (trials < 1) throw InputError("trials must be >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw InputError("eps must lie in (0, 1)");
    if (jobs < 1) throw InputError("jobs must be >= 1");
    if (kind == ExperimentKind::kGreedy) {
      if (oracle.empty() || constraints.empty()) {
        throw InputError("greedy needs --oracle and --constraints");
      }
    } else if (instance.empty()) {
      throw InputError(kind_name(kind) + " needs --instance");
    }
  }
};

/// Formats a double with the shortest round-trip representation.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// Metric rows shared by the packing, probing, greedy and diagnostics
/// reports. Upper-bound metrics pass when estimate <= bound + 3 stderr.
struct ReportRow {
  std::string metric;
  std::string target;
  double estimate = 0.0;
  double std_err = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double bound = 0.0;
  bool pass = true;
};

inline ReportRow proportion_row(std::string metric, std::string target,
                                const ProportionEstimate& p, double bound, bool pass) {
  ReportRow r{std::move(metric), std::move(target), p.mean(), p.std_err(), 0.0, 0.0, bound, pass};
  if (const auto ci = p.wilson()) {
    r.ci_lo = ci->lo;
    r.ci_hi = ci->hi;
  } else {
    r.ci_lo = r.ci_hi = std::nan("");
  }
  return r;
}

inline ReportRow mean_row(std::string metric, std::string target, const MeanEstimate& m,
                          double bound, bool pass) {
  const auto ci = m.normal_ci();
  return {std::move(metric), std::move(target), m.mean, m.std_err, ci.lo, ci.hi, bound, pass};
}

inline std::string rows_csv(const std::vector<ReportRow>& rows) {
  std::string s = "metric,target,estimate,stderr,ci_lo,ci_hi,bound,pass\n";
  for (const auto& r : rows) {
    s += r.metric + ',' + r.target + ',' + fmt(r.estimate) + ',' + fmt(r.std_err) + ',' +
         fmt(r.ci_lo) + ',' + fmt(r.ci_hi) + ',' + fmt(r.bound) + ',' +
         (r.pass ? "true" : "false") + '\n';
  }
  return s;
}

struct ExperimentResult {
  bool pass = true;
  std::string csv;
  json summary;
  std::optional<std::string> traces;  // trial,element,step,S,Z,Y
};

namespace detail {

inline json mean_json(const MeanEstimate& m) {
  return {{"mean", m.mean}, {"stderr", m.std_err}, {"count", m.count}};
}

inline ExperimentResult run_crs_experiment(const ExperimentConfig& cfg) {
  const json doc = read_json_file(cfg.instance);
  const CrsInstance inst = parse_crs_instance(doc);
  const CrsScheme scheme(inst);
  const auto rep = estimate_acceptance(scheme, cfg.trials, cfg.seed, cfg.jobs);

  ExperimentResult out;
  out.csv = "element,conditioning_count,accept_count,mean,stderr,wilson_lo,wilson_hi,bound,pass\n";
  for (int e = 0; e < scheme.size(); ++e) {
    const auto& el = rep.elements[static_cast<std::size_t>(e)];
    const auto& est = rep.conditional ? el.conditional : el.unconditional;
    const auto ci = est.wilson();
    out.csv += std::to_string(e) + ',' + std::to_string(est.trials) + ',' +
               std::to_string(est.successes) + ',' + fmt(est.mean()) + ',' +
               fmt(est.std_err()) + ',' + (ci ? fmt(ci->lo) : "nan") + ',' +
               (ci ? fmt(ci->hi) : "nan") + ',' + fmt(el.bound) + ',' +
               (el.pass ? "true" : "false") + '\n';
  }
  out.pass = rep.all_pass();
  out.summary = {{"conditional", rep.conditional},
                 {"infeasible", rep.infeasible},
                 {"lambda", scheme.lambda()}};

  // Exact acceptance when the instance is small and matroid-only.
  const bool matroids_only = std::all_of(inst.constraints.begin(), inst.constraints.end(),
                                         [](const Constraint& c) { return is_matroid(c); });
  if (matroids_only && inst.n <= enumeration_cap(kBruteForceCap)) {
    const auto exact = brute_force_acceptance(scheme);
    json arr = json::array();
    bool ok = true;
    for (int e = 0; e < inst.n; ++e) {
      const double v = exact[static_cast<std::size_t>(e)];
      if (std::isnan(v)) {
        arr.push_back(nullptr);
        continue;
      }
      arr.push_back(v);
      if (v < scheme.bound(e)) ok = false;
    }
    out.summary["exact_acceptance"] = arr;
    out.summary["exact_pass"] = ok;
    out.pass = out.pass && ok;
  }

  // Submodular filter when the instance carries an objective.
  if (doc.contains("oracle")) {
    const auto f = parse_oracle(io::Node(doc, "").at("oracle"));
    if (f.size() != inst.n) throw ParseError("oracle: ground set size differs from n");
    const auto sr = estimate_submodular_crs(scheme, f, cfg.trials, cfg.seed, cfg.jobs);
    out.summary["submodular"] = {{"value", mean_json(sr.value)},
                                 {"benchmark", sr.benchmark},
                                 {"bound", sr.bound},
                                 {"infeasible", sr.infeasible},
                                 {"pass", sr.pass}};
    out.pass = out.pass && sr.pass;
  }
  return out;
}

inline ExperimentResult run_auction_experiment(const ExperimentConfig& cfg) {
  const AuctionInstance inst = parse_auction_instance(read_json_file(cfg.instance));
  const auto sol = solve_bmumd(inst);
  const AuctionMechanism mech(inst, sol, cfg.eps);
  const auto rep = estimate_auction(mech, cfg.trials, cfg.seed, cfg.jobs);

  ExperimentResult out;
  std::ostringstream csv;
  csv << "trial,revenue,lp_bound,ratio\n";
  for (std::uint64_t i = 0; i < rep.trials; ++i) {
    const double r = rep.revenues[i];
    csv << i << ',' << fmt(r) << ',' << fmt(rep.lp_bound) << ','
        << fmt(rep.lp_bound > 0.0 ? r / rep.lp_bound : 0.0) << '\n';
  }
  out.csv = csv.str();
  out.pass = rep.pass;
  out.summary = {{"revenue", mean_json(rep.revenue)},
                 {"lp_bound", rep.lp_bound},
                 {"lambda", mech.lambda()},
                 {"bound", rep.bound},
                 {"infeasible", rep.infeasible},
                 {"pass", rep.pass}};
  return out;
}

inline ExperimentResult run_packing_experiment(const ExperimentConfig& cfg) {
  const auto doc = parse_packing_instance(read_json_file(cfg.instance));
  const auto lp = solve_setpacking(doc.instance);
  const std::vector<double> x = doc.x.value_or(lp.x);
  // The value bound is relative to the point actually rounded.
  double target = 0.0;
  for (int e = 0; e < doc.instance.n; ++e) {
    target += x[static_cast<std::size_t>(e)] * doc.instance.expected_value(e);
  }
  const PackingScheme scheme(doc.instance, x);
  const auto rep = estimate_packing(scheme, target, cfg.trials, cfg.seed, cfg.jobs);

  std::vector<ReportRow> rows;
  for (int e = 0; e < scheme.size(); ++e) {
    const auto& p = rep.probes[static_cast<std::size_t>(e)];
    rows.push_back(proportion_row("probe_frequency", std::to_string(e), p.frequency, p.bound, p.pass));
  }
  rows.push_back(mean_row("value", "all", rep.value, rep.bound, rep.pass));
  ExperimentResult out;
  out.csv = rows_csv(rows);
  out.pass = rep.all_pass();
  out.summary = {{"value", mean_json(rep.value)},
                 {"lp_optimum", lp.objective},
                 {"point_value", target},
                 {"k", scheme.k()},
                 {"bound", rep.bound},
                 {"infeasible", rep.infeasible},
                 {"pass", rep.all_pass()}};
  return out;
}

inline ExperimentResult run_probing_experiment(const ExperimentConfig& cfg) {
  const auto doc = parse_probing_instance(read_json_file(cfg.instance));
  std::vector<double> x;
  json relax = nullptr;
  if (doc.x) {
    x = *doc.x;
  } else {
    Rng rng(derive_seed(cfg.seed, ~std::uint64_t{0}));
    const auto sol = solve_probing_mp(doc.instance, cfg.eps, rng);
    x = sol.x;
    relax = {{"steps", sol.trajectory.times.size() - 1}, {"value", sol.trajectory.values.back()}};
  }
  const ProbingScheme scheme(doc.instance, x);
  const auto rep = estimate_probing_objective(scheme, cfg.trials, cfg.seed, cfg.jobs, cfg.filter);

  std::vector<ReportRow> rows;
  for (int e = 0; e < scheme.size(); ++e) {
    const auto& p = rep.probes[static_cast<std::size_t>(e)];
    rows.push_back(proportion_row("probe_frequency", std::to_string(e), p.frequency, p.bound, p.pass));
  }
  rows.push_back(mean_row("value", "all", rep.value, rep.bound, rep.pass));
  ExperimentResult out;
  out.csv = rows_csv(rows);
  out.pass = rep.all_pass();
  out.summary = {{"value", mean_json(rep.value)},
                 {"benchmark", rep.benchmark},
                 {"benchmark_exact", rep.benchmark_exact},
                 {"lambda", scheme.lambda()},
                 {"bound", rep.bound},
                 {"filter", rep.filter},
                 {"infeasible", rep.infeasible},
                 {"pass", rep.all_pass()}};
  if (!relax.is_null()) out.summary["relaxation"] = relax;
  return out;
}

inline ExperimentResult run_greedy_experiment(const ExperimentConfig& cfg) {
  const auto f = parse_oracle(io::Node(read_json_file(cfg.oracle), ""));
  int n = 0;
  const auto cs = parse_constraint_file(read_json_file(cfg.constraints), &n);
  if (f.size() != n) throw InputError("greedy: oracle and constraints differ in ground set size");
  PolytopeSystem poly(n);
  for (const auto& c : cs) poly.add(c);
  GreedyOptions opt;
  opt.T = cfg.T;
  opt.steps = cfg.steps;
  Rng rng(derive_seed(cfg.seed, 0));
  const auto tr = measured_continuous_greedy(f, poly, opt, rng);

  ExperimentResult out;
  std::ostringstream csv;
  csv << "step,time,value,max_y,envelope,pass\n";
  bool envelope_ok = true;
  for (std::size_t k = 0; k < tr.points.size(); ++k) {
    const double t = tr.times[k];
    const double env = 1.0 - std::pow(1.0 - tr.delta, t / tr.delta);
    double ymax = 0.0;
    for (double v : tr.points[k]) ymax = std::max(ymax, v);
    const bool ok = ymax <= env + 1e-12;
    envelope_ok = envelope_ok && ok;
    csv << k << ',' << fmt(t) << ',' << fmt(tr.values[k]) << ',' << fmt(ymax) << ','
        << fmt(env) << ',' << (ok ? "true" : "false") << '\n';
  }
  out.csv = csv.str();
  out.pass = envelope_ok;
  json y = tr.result();
  out.summary = {{"value", tr.values.back()},
                 {"exact", tr.exact},
                 {"delta", tr.delta},
                 {"y", y},
                 {"envelope_pass", envelope_ok}};
  if (tr.exact) {
    const double opt_value = brute_force_optimum(f, cs).first;
    const double bound = (cfg.T * std::exp(-cfg.T) - cfg.eps) * opt_value;
    const bool ok = tr.values.back() >= bound;
    out.summary["optimum"] = opt_value;
    out.summary["bound"] = bound;
    out.summary["bound_pass"] = ok;
    out.pass = out.pass && ok;
  }
  return out;
}

inline ExperimentResult run_diagnostics_experiment(const ExperimentConfig& cfg) {
  const CrsInstance inst = parse_crs_instance(read_json_file(cfg.instance));
  const CrsScheme scheme(inst);
  const auto rep = run_diagnostics(scheme, cfg.trials, cfg.seed, cfg.jobs);

  std::vector<ReportRow> rows;
  auto add_acc = [&](const TraceAccumulator& acc, const std::string& scope) {
    const int n = acc.size();
    for (int e = 0; e < n; ++e) {
      rows.push_back(mean_row(scope + ":stopping_value", std::to_string(e), acc.stopping_value(e),
                              1.0, acc.stopping_pass(e)));
    }
    for (int e = 0; e < n; ++e) {
      for (int t = 0; t < n; ++t) {
        const auto p = acc.blocking(e, t);
        if (!p.defined()) continue;
        rows.push_back(proportion_row(scope + ":blocking_rate", std::to_string(e) + "@" + std::to_string(t),
                                      p, acc.blocking_bound(t), acc.blocking_pass(e, t)));
      }
    }
  };
  add_acc(rep.joint, "joint");
  for (std::size_t c = 0; c < rep.constituents.size(); ++c) {
    add_acc(rep.constituents[c], "constraint" + std::to_string(c));
  }
  ExperimentResult out;
  out.csv = rows_csv(rows);
  out.pass = rep.all_pass();
  out.summary = {{"lambda", scheme.lambda()},
                 {"infeasible", rep.infeasible},
                 {"relation_violations", rep.relation_violations},
                 {"pass", rep.all_pass()}};

  if (cfg.trace_trials > 0) {
    std::ostringstream ts;
    ts << "trial,element,step,S,Z,Y\n";
    RunOptions opt;
    opt.trace = true;
    for (std::uint64_t i = 0; i < std::min(cfg.trace_trials, cfg.trials); ++i) {
      Rng rng(derive_seed(cfg.seed, i));
      write_trace_csv(ts, i, *run_crs(scheme, rng, opt).trace);
    }
    out.traces = ts.str();
  }
  return out;
}

}  // namespace detail

/// Runs one experiment. Output depends only on the config minus `jobs`.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult r;
  switch (cfg.kind) {
    case ExperimentKind::kCrs: r = detail::run_crs_experiment(cfg); break;
    case ExperimentKind::kAuction: r = detail::run_auction_experiment(cfg); break;
    case ExperimentKind::kPacking: r = detail::run_packing_experiment(cfg); break;
    case ExperimentKind::kProbing: r = detail::run_probing_experiment(cfg); break;
    case ExperimentKind::kGreedy: r = detail::run_greedy_experiment(cfg); break;
    case ExperimentKind::kDiagnostics: r = detail::run_diagnostics_experiment(cfg); break;
  }
  json head = {{"experiment", kind_name(cfg.kind)},
               {"seed", cfg.seed},
               {"trials", cfg.trials},
               {"eps", cfg.eps},
               {"pass", r.pass}};
  head.update(r.summary);
  head["pass"] = r.pass;
  r.summary = std::move(head);
  return r;
}

/// Companion file next to a report: report.csv -> report.summary.json, report.traces.csv.
inline std::string sibling_path(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  p.replace_extension();
  return p.string() + suffix;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError(path + ": cannot write file");
  os << text;
  if (!os) throw InputError(path + ": write failed");
}

/// Writes the CSV to `out`, the summary to its .summary.json sibling and traces, if
/// any, to its .traces.csv sibling.
inline void write_experiment(const ExperimentResult& r, const std::string& out) {
  write_text_file(out, r.csv);
  write_text_file(sibling_path(out, ".summary.json"), r.summary.dump(2) + "\n");
  if (r.traces) write_text_file(sibling_path(out, ".traces.csv"), *r.traces);
}

/// 0 when every bound check passed, 1 otherwise.
inline int exit_code(const ExperimentResult& r) { return r.pass ? 0 : 1; }

/// Parameters of generate_instance; each kind reads the fields it needs.
struct GenerateParams {
  std::string kind = "crs";  // crs, constraints, oracle, auction, packing, probing
  std::uint64_t seed = 1;
  int n = 8;
  int graphic = 1;
  int partition = 0;
  int uniform = 0;
  int knapsacks = 0;
  bool big = false;     // knapsack sizes up to 0.9 instead of 1/2
  double scale = 0.9;   // point scale
  std::string oracle = "coverage";  // coverage or cut
  int universe = 8;
  int clients = 3;
  int per_client = 2;
  int max_value = 10;
  int k = 1;
  int rows = 3;
  int k_in = 1;
  int k_out = 1;
  bool point = false;   // packing/probing: include a feasible x
};

namespace detail {

inline std::vector<Constraint> generate_constraints(const GenerateParams& g, Rng& rng) {
  if (g.n < 1 || g.n > kMaxElements) throw InputError("generate: n out of range");
  if (g.graphic < 0 || g.partition < 0 || g.uniform < 0 || g.knapsacks < 0) {
    throw InputError("generate: constraint counts must be nonnegative");
  }
  std::vector<Constraint> cs;
  for (int i = 0; i < g.graphic; ++i) cs.push_back(generate_graphic(rng, std::max(3, g.n / 2 + 1), g.n));
  for (int i = 0; i < g.partition; ++i) cs.push_back(generate_random_partition(rng, g.n, std::max(2, g.n / 3)));
  for (int i = 0; i < g.uniform; ++i) cs.push_back(Matroid::uniform(g.n, std::max(1, g.n / 3)));
  for (int i = 0; i < g.knapsacks; ++i) cs.push_back(generate_knapsack(rng, g.n, 0.05, g.big ? 0.9 : 0.5));
  if (cs.empty()) throw InputError("generate: no constraints requested");
  return cs;
}

}  // namespace detail

/// A random instance document; the same params give a byte-identical dump.
inline json generate_instance(const GenerateParams& g) {
  Rng rng(derive_seed(g.seed, 0));
  if (g.kind == "crs") {
    CrsInstance inst;
    inst.n = g.n;
    inst.constraints = detail::generate_constraints(g, rng);
    inst.x = generate_point(inst.constraints, g.n, rng, g.scale);
    for (const auto& c : inst.constraints) {
      const auto* k = std::get_if<KnapsackConstraint>(&c);
      inst.reduce.push_back(k != nullptr && !k->bounded());
    }
    inst.validate();
    return crs_instance_to_json(inst);
  }
  if (g.kind == "constraints") {
    const auto cs = detail::generate_constraints(g, rng);
    return {{"n", g.n}, {"constraints", constraints_to_json(cs)}};
  }
  if (g.kind == "oracle") {
    if (g.oracle == "coverage") return oracle_to_json(generate_coverage(rng, g.n, g.universe));
    if (g.oracle == "cut") return oracle_to_json(generate_cut(rng, g.n));
    throw InputError("generate: unknown oracle kind '" + g.oracle + "'");
  }
  if (g.kind == "auction") {
    const auto inst = generate_auction(rng, g.clients, g.per_client, g.max_value, g.k);
    inst.validate();
    return auction_instance_to_json(inst);
  }
  if (g.kind == "packing") {
    const auto inst = generate_packing(rng, g.n, g.rows, g.k);
    inst.validate();
    std::optional<std::vector<double>> x;
    if (g.point) x = generate_packing_point(inst, rng, g.scale);
    return packing_instance_to_json(inst, x);
  }
  if (g.kind == "probing") {
    const auto inst = generate_probing(rng, g.n, g.k_in, g.k_out, g.oracle == "cut");
    inst.validate();
    std::optional<std::vector<double>> x;
    if (g.point) x = generate_probing_point(inst, rng, g.scale);
    return probing_instance_to_json(inst, x);
  }
  throw InputError("generate: unknown instance kind '" + g.kind + "'");
}

}  // namespace rocrs

#endif  // ROCRS_EXPERIMENT_HPP
