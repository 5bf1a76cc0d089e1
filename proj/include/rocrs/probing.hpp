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


#ifndef ROCRS_PROBING_HPP
#define ROCRS_PROBING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rocrs/controllers.hpp"
#include "rocrs/crs.hpp"
#include "rocrs/error.hpp"
#include "rocrs/instances.hpp"
#include "rocrs/parallel.hpp"
#include "rocrs/random.hpp"
#include "rocrs/stats.hpp"
#include "rocrs/submodular.hpp"
#include "rocrs/trace.hpp"

namespace rocrs {

struct ProbeEvent {
  enum class Kind { kOuterUpdate, kProbe, kInnerUpdate };
  int step = 0;
  int element = 0;
  Kind kind = Kind::kProbe;
  bool success = false;
};

struct ProbingOptions {
  // Skip elements whose marginal gain f(S + e) - f(S) is not positive.
  bool filter = false;
  bool trace = false;
  bool log = false;
};

struct ProbingRunResult {
  ElementSet active;  // R(x)
  ElementSet probed;  // Q
  ElementSet taken;   // S
  std::vector<int> permutation;
  bool feasible = true;
  std::optional<CharacteristicTrace> trace;
  std::vector<ProbeEvent> log;
};

/// Controller mechanism for stochastic probing over a fixed x. Outer
/// controllers are built on x, inner ones on p x. At its turn an element of
/// R(x) that no controller blocks (and that passes the gain filter when
/// enabled) updates the outer controllers, is probed, and on success is
/// taken and updates the inner controllers.
class ProbingScheme {
 public:
  ProbingScheme(ProbingInstance inst, std::vector<double> x)
      : inst_(std::move(inst)), x_(std::move(x)) {
    inst_.validate();
    if (static_cast<int>(x_.size()) != inst_.n) throw InputError("probing: x has wrong length");
    for (double v : x_) {
      if (!(v >= -kPolytopeTol && v <= 1.0 + kPolytopeTol)) {
        throw DomainError("probing: x outside [0, 1]");
      }
    }
    std::vector<double> px(x_.size());
    for (std::size_t e = 0; e < px.size(); ++e) px[e] = inst_.p[e] * x_[e];
    for (const auto& c : inst_.outer) plans_.push_back(make_plan(c, x_));
    for (const auto& c : inst_.inner) plans_.push_back(make_plan(c, px));
  }

  const ProbingInstance& instance() const { return inst_; }
  const std::vector<double>& x() const { return x_; }
  int size() const { return inst_.n; }
  int lambda() const { return inst_.lambda(); }
  std::size_t outer_count() const { return inst_.outer.size(); }

  ProbingRunResult run(Rng& rng, const ProbingOptions& opt = {}) const {
    const int n = inst_.n;
    ProbingRunResult out;
    out.active = sample_active_set(x_, rng);
    JointController jc;
    for (const auto& plan : plans_) {
      jc.add(make_controller(plan, rng), ElementSet::full(n), plan_lambda(plan));
    }
    out.permutation = rng.permutation(n);
    if (opt.trace) {
      out.trace.emplace(n);
      out.trace->block_initially(jc.blocked_set());
    }
    for (int t = 0; t < n; ++t) {
      const int e = out.permutation[static_cast<std::size_t>(t)];
      if (!out.active.contains(e) || jc.blocked(e)) continue;
      if (opt.filter && !(inst_.f(out.taken.with(e)) - inst_.f(out.taken) > kGainTol)) continue;
      StepEvents ev;
      ev.taken.insert(e);
      for (std::size_t i = 0; i < outer_count(); ++i) {
        ev.blocked = ev.blocked | jc.accept_in(i, e, rng);
        if (opt.log) out.log.push_back({t, e, ProbeEvent::Kind::kOuterUpdate, false});
      }
      out.probed.insert(e);
      const double p = inst_.p[static_cast<std::size_t>(e)];
      const bool success = p >= 1.0 || (p > 0.0 && rng.bernoulli(p));
      if (opt.log) out.log.push_back({t, e, ProbeEvent::Kind::kProbe, success});
      if (success) {
        out.taken.insert(e);
        for (std::size_t i = outer_count(); i < jc.size(); ++i) {
          ev.blocked = ev.blocked | jc.accept_in(i, e, rng);
          if (opt.log) out.log.push_back({t, e, ProbeEvent::Kind::kInnerUpdate, true});
        }
      }
      if (opt.trace) {
        ElementSet fresh;
        for (int f : ev.blocked) {
          if (!out.trace->resolved(f)) fresh.insert(f);
        }
        ev.blocked = fresh;
        out.trace->record_step(t, ev);
      }
    }
    out.feasible = is_feasible(inst_.outer, out.probed) && is_feasible(inst_.inner, out.taken);
    return out;
  }

 private:
  ProbingInstance inst_;
  std::vector<double> x_;
  std::vector<ControllerPlan> plans_;
};

inline ProbingRunResult run_probing(const ProbingInstance& inst, const std::vector<double>& x,
                                    Rng& rng, const ProbingOptions& opt = {}) {
  return ProbingScheme(inst, x).run(rng, opt);
}

struct ElementBound {
  ProportionEstimate frequency;
  double bound = 0.0;
  bool pass = true;
};

struct ProbingReport {
  std::uint64_t trials = 0;
  std::uint64_t infeasible = 0;
  bool filter = false;
  MeanEstimate value;
  double benchmark = 0.0;  // F(p x)
  bool benchmark_exact = true;
  double bound = 0.0;      // F(p x) / (lambda + 1)
  bool pass = true;
  std::vector<ElementBound> probes;  // Pr[probed] vs x_e / (lambda + 1)
  bool all_pass() const {
    if (!pass || infeasible != 0) return false;
    for (const auto& p : probes) {
      if (!p.pass) return false;
    }
    return true;
  }
};

/// Monte-Carlo E[f(S)] and probe frequencies. The per-element probe bound
/// is only asserted without the gain filter.
inline ProbingReport estimate_probing_objective(const ProbingScheme& scheme, std::uint64_t trials,
                                                std::uint64_t master_seed, int jobs = 1,
                                                bool filter = true) {
  if (trials < 1) throw InputError("estimate_probing_objective: trials must be >= 1");
  const int n = scheme.size();
  ProbingReport rep;
  rep.trials = trials;
  rep.filter = filter;
  std::vector<double> values(trials, 0.0);
  struct Counts {
    std::vector<std::uint64_t> probed;
    std::uint64_t infeasible = 0;
  };
  std::vector<Counts> parts(static_cast<std::size_t>(std::max(jobs, 1)));
  ProbingOptions opt;
  opt.filter = filter;
  parallel_chunks(trials, jobs, [&](std::uint64_t begin, std::uint64_t end, std::size_t chunk) {
    Counts c;
    c.probed.assign(static_cast<std::size_t>(n), 0);
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(master_seed, i));
      const auto r = scheme.run(rng, opt);
      values[i] = scheme.instance().f(r.taken);
      if (!r.feasible) ++c.infeasible;
      for (int e : r.probed) ++c.probed[static_cast<std::size_t>(e)];
    }
    parts[chunk] = std::move(c);
  });
  rep.value = estimate_mean(values);
  const double denom = scheme.lambda() + 1.0;
  rep.probes.resize(static_cast<std::size_t>(n));
  for (const auto& c : parts) {
    rep.infeasible += c.infeasible;
    for (int e = 0; e < n; ++e) rep.probes[static_cast<std::size_t>(e)].frequency.successes += c.probed[static_cast<std::size_t>(e)];
  }
  for (int e = 0; e < n; ++e) {
    auto& pb = rep.probes[static_cast<std::size_t>(e)];
    pb.frequency.trials = trials;
    pb.bound = scheme.x()[static_cast<std::size_t>(e)] / denom;
    pb.pass = filter || passes_lower_bound(pb.frequency.mean(), pb.frequency.std_err(), pb.bound);
  }
  std::vector<double> px(static_cast<std::size_t>(n));
  for (int e = 0; e < n; ++e) {
    px[static_cast<std::size_t>(e)] =
        scheme.instance().p[static_cast<std::size_t>(e)] * scheme.x()[static_cast<std::size_t>(e)];
  }
  if (n <= kExactMultilinearCap) {
    rep.benchmark = multilinear_exact(scheme.instance().f, px);
  } else {
    Rng rng(derive_seed(master_seed, trials));
    rep.benchmark = multilinear_mc(scheme.instance().f, px, 100000, rng).mean;
    rep.benchmark_exact = false;
  }
  rep.bound = rep.benchmark / denom;
  rep.pass = passes_lower_bound(rep.value.mean, rep.value.std_err, rep.bound);
  return rep;
}

struct PackingRunResult {
  ElementSet probed;
  std::vector<ElementSet> materialized;  // per row
  double value = 0.0;
  std::vector<int> permutation;
  bool feasible = true;
  std::optional<CharacteristicTrace> trace;
};

/// Controller mechanism for stochastic k-set packing. Row i controllers are
/// built on p^i x and cover the elements that can materialize in row i. An
/// element no covering controller blocks is probed with probability x_e;
/// its outcome updates exactly the rows where its copy materialized.
class PackingScheme {
 public:
  PackingScheme(PackingInstance inst, std::vector<double> x)
      : inst_(std::move(inst)), x_(std::move(x)) {
    inst_.validate();
    if (static_cast<int>(x_.size()) != inst_.n) throw InputError("packing: x has wrong length");
    for (double v : x_) {
      if (!(v >= -kPolytopeTol && v <= 1.0 + kPolytopeTol)) {
        throw DomainError("packing: x outside [0, 1]");
      }
    }
    for (int i = 0; i < inst_.row_count(); ++i) {
      std::vector<double> px(x_.size());
      ElementSet cover;
      for (int e = 0; e < inst_.n; ++e) {
        const double m = inst_.marginal(e, i);
        px[static_cast<std::size_t>(e)] = m * x_[static_cast<std::size_t>(e)];
        if (m > 0.0) cover.insert(e);
      }
      plans_.push_back(std::make_shared<const MatroidPlan>(
          inst_.row_matroids[static_cast<std::size_t>(i)], px));
      coverage_.push_back(cover);
    }
  }

  const PackingInstance& instance() const { return inst_; }
  const std::vector<double>& x() const { return x_; }
  int size() const { return inst_.n; }
  int k() const { return inst_.k(); }

  PackingRunResult run(Rng& rng, bool trace = false) const {
    const int n = inst_.n;
    JointController jc;
    for (std::size_t i = 0; i < plans_.size(); ++i) {
      jc.add(MatroidController(plans_[i], rng), coverage_[i], 1);
    }
    PackingRunResult out;
    out.materialized.assign(plans_.size(), ElementSet());
    out.permutation = rng.permutation(n);
    if (trace) {
      out.trace.emplace(n);
      out.trace->block_initially(jc.blocked_set());
    }
    for (int t = 0; t < n; ++t) {
      const int e = out.permutation[static_cast<std::size_t>(t)];
      if (jc.blocked(e)) continue;
      StepEvents ev;
      ev.taken.insert(e);
      const double xe = x_[static_cast<std::size_t>(e)];
      if (xe >= 1.0 || (xe > 0.0 && rng.bernoulli(xe))) {
        out.probed.insert(e);
        const auto& outs = inst_.outcomes[static_cast<std::size_t>(e)];
        std::vector<double> w;
        for (const auto& o : outs) w.push_back(o.prob);
        const auto& o = outs[rng.pick(w)];
        out.value += o.value;
        for (int i : o.rows) {
          out.materialized[static_cast<std::size_t>(i)].insert(e);
          ev.blocked = ev.blocked | jc.accept_in(static_cast<std::size_t>(i), e, rng);
        }
      }
      if (trace) {
        ElementSet fresh;
        for (int f : ev.blocked) {
          if (!out.trace->resolved(f)) fresh.insert(f);
        }
        ev.blocked = fresh;
        out.trace->record_step(t, ev);
      }
    }
    for (std::size_t i = 0; i < plans_.size(); ++i) {
      if (!inst_.row_matroids[i].is_independent(out.materialized[i])) out.feasible = false;
    }
    return out;
  }

 private:
  PackingInstance inst_;
  std::vector<double> x_;
  std::vector<std::shared_ptr<const MatroidPlan>> plans_;
  std::vector<ElementSet> coverage_;
};

inline PackingRunResult run_kset_packing(const PackingInstance& inst,
                                         const std::vector<double>& x, Rng& rng) {
  return PackingScheme(inst, x).run(rng);
}

struct PackingReport {
  std::uint64_t trials = 0;
  std::uint64_t infeasible = 0;
  MeanEstimate value;
  double lp_bound = 0.0;
  double bound = 0.0;  // LP* / (k + 1)
  bool pass = true;
  std::vector<ElementBound> probes;  // Pr[probed] vs x_e / (k + 1)
  bool all_pass() const {
    if (!pass || infeasible != 0) return false;
    for (const auto& p : probes) {
      if (!p.pass) return false;
    }
    return true;
  }
};

/// lp_objective is the LP value x was taken from; it sets the value bound.
inline PackingReport estimate_packing(const PackingScheme& scheme, double lp_objective,
                                      std::uint64_t trials, std::uint64_t master_seed,
                                      int jobs = 1) {
  if (trials < 1) throw InputError("estimate_packing: trials must be >= 1");
  const int n = scheme.size();
  PackingReport rep;
  rep.trials = trials;
  std::vector<double> values(trials, 0.0);
  struct Counts {
    std::vector<std::uint64_t> probed;
    std::uint64_t infeasible = 0;
  };
  std::vector<Counts> parts(static_cast<std::size_t>(std::max(jobs, 1)));
  parallel_chunks(trials, jobs, [&](std::uint64_t begin, std::uint64_t end, std::size_t chunk) {
    Counts c;
    c.probed.assign(static_cast<std::size_t>(n), 0);
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(master_seed, i));
      const auto r = scheme.run(rng);
      values[i] = r.value;
      if (!r.feasible) ++c.infeasible;
      for (int e : r.probed) ++c.probed[static_cast<std::size_t>(e)];
    }
    parts[chunk] = std::move(c);
  });
  rep.value = estimate_mean(values);
  const double denom = scheme.k() + 1.0;
  rep.probes.resize(static_cast<std::size_t>(n));
  for (const auto& c : parts) {
    rep.infeasible += c.infeasible;
    for (int e = 0; e < n; ++e) rep.probes[static_cast<std::size_t>(e)].frequency.successes += c.probed[static_cast<std::size_t>(e)];
  }
  for (int e = 0; e < n; ++e) {
    auto& pb = rep.probes[static_cast<std::size_t>(e)];
    pb.frequency.trials = trials;
    pb.bound = scheme.x()[static_cast<std::size_t>(e)] / denom;
    pb.pass = passes_lower_bound(pb.frequency.mean(), pb.frequency.std_err(), pb.bound);
  }
  rep.lp_bound = lp_objective;
  rep.bound = lp_objective / denom;
  rep.pass = passes_lower_bound(rep.value.mean, rep.value.std_err, rep.bound);
  return rep;
}

inline constexpr int kStrategyCap = 6;

/// Value of the best adaptive probing strategy, by exhaustive search over
/// (probed, taken) states. An element may be probed when adding it keeps
/// the probed set feasible in `outer` and the taken set feasible in `inner`;
/// the strategy may stop at any time and collects f(taken).
inline double optimal_probing_value(const ProbingInstance& inst) {
  inst.validate();
  require_cap(inst.n, enumeration_cap(kStrategyCap), "optimal_probing_value");
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> memo;
  auto solve = [&](auto&& self, ElementSet q, ElementSet s) -> double {
    const auto key = std::make_pair(q.bits(), s.bits());
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    double best = inst.f(s);
    for (int e : ElementSet::full(inst.n) - q) {
      if (!is_feasible(inst.outer, q.with(e)) || !is_feasible(inst.inner, s.with(e))) continue;
      const double p = inst.p[static_cast<std::size_t>(e)];
      double v = 0.0;
      if (p > 0.0) v += p * self(self, q.with(e), s.with(e));
      if (p < 1.0) v += (1.0 - p) * self(self, q.with(e), s);
      best = std::max(best, v);
    }
    memo.emplace(key, best);
    return best;
  };
  return solve(solve, ElementSet(), ElementSet());
}

/// Value of the best adaptive k-set packing strategy. Probing e is allowed
/// when its copy fits in every row where it can materialize.
inline double optimal_packing_value(const PackingInstance& inst) {
  inst.validate();
  require_cap(inst.n, enumeration_cap(kStrategyCap), "optimal_packing_value");
  const int d = inst.row_count();
  std::map<std::vector<std::uint64_t>, double> memo;
  auto solve = [&](auto&& self, ElementSet probed, std::vector<ElementSet>& rows) -> double {
    std::vector<std::uint64_t> key{probed.bits()};
    for (const auto& r : rows) key.push_back(r.bits());
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    double best = 0.0;
    for (int e : ElementSet::full(inst.n) - probed) {
      bool fits = true;
      for (int i = 0; i < d && fits; ++i) {
        if (inst.marginal(e, i) > 0.0) {
          fits = inst.row_matroids[static_cast<std::size_t>(i)].is_independent(
              rows[static_cast<std::size_t>(i)].with(e));
        }
      }
      if (!fits) continue;
      double v = 0.0;
      for (const auto& o : inst.outcomes[static_cast<std::size_t>(e)]) {
        if (o.prob <= 0.0) continue;
        for (int i : o.rows) rows[static_cast<std::size_t>(i)].insert(e);
        v += o.prob * (o.value + self(self, probed.with(e), rows));
        for (int i : o.rows) rows[static_cast<std::size_t>(i)].erase(e);
      }
      best = std::max(best, v);
    }
    memo.emplace(std::move(key), best);
    return best;
  };
  std::vector<ElementSet> rows(static_cast<std::size_t>(d));
  return solve(solve, ElementSet(), rows);
}

}  // namespace rocrs

#endif  // ROCRS_PROBING_HPP
