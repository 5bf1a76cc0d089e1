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

#ifndef ROCRS_CRS_HPP
#define ROCRS_CRS_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rocrs/constraint.hpp"
#include "rocrs/controllers.hpp"
#include "rocrs/element_set.hpp"
#include "rocrs/error.hpp"
#include "rocrs/exchange.hpp"
#include "rocrs/parallel.hpp"
#include "rocrs/random.hpp"
#include "rocrs/stats.hpp"
#include "rocrs/support.hpp"
#include "rocrs/trace.hpp"

namespace rocrs {

inline constexpr double kPolytopeTol = 1e-9;
/// At most this many knapsacks may go through the big/small reduction.
inline constexpr int kMaxReducedKnapsacks = 10;

/// A fractional point and the constraints it must satisfy. Knapsacks with
/// `reduce` set go through the big/small split before their controller is
/// built; the others must be bounded.
struct CrsInstance {
  int n = 0;
  std::vector<double> x;
  std::vector<Constraint> constraints;
  std::vector<bool> reduce;

  void validate() const {
    require_ground_size(n);
    if (static_cast<int>(x.size()) != n) {
      throw InputError("instance: x has " + std::to_string(x.size()) +
                       " entries for " + std::to_string(n) + " elements");
    }
    for (int e = 0; e < n; ++e) {
      const double v = x[static_cast<std::size_t>(e)];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InputError("instance: x[" + std::to_string(e) +
                         "] outside [0, 1]");
      }
    }
    if (!reduce.empty() && reduce.size() != constraints.size()) {
      throw InputError("instance: reduce flags do not match constraints");
    }
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const auto& c = constraints[i];
      if (constraint_size(c) != n) {
        throw InputError("instance: constraint " + std::to_string(i) +
                         " has a different ground set size");
      }
      if (reduced(i) && is_matroid(c)) {
        throw InputError("instance: only knapsacks can be reduced");
      }
      if (!reduced(i) && !is_matroid(c) &&
          !std::get<KnapsackConstraint>(c).bounded()) {
        throw DomainError("instance: knapsack " + std::to_string(i) +
                          " has sizes above 1/2 and is not reduced");
      }
      if (!in_constraint_polytope(c, x, kPolytopeTol)) {
        throw DomainError("instance: x lies outside the polytope of constraint " +
                          std::to_string(i) + " (" + constraint_name(c) + ")");
      }
    }
  }

  bool reduced(std::size_t i) const { return !reduce.empty() && reduce[i]; }
  int reduced_count() const {
    int q = 0;
    for (std::size_t i = 0; i < constraints.size(); ++i) q += reduced(i) ? 1 : 0;
    return q;
  }
  int matroid_count() const {
    int k = 0;
    for (const auto& c : constraints) k += is_matroid(c) ? 1 : 0;
    return k;
  }
};

inline ElementSet sample_active_set(std::span<const double> x, Rng& rng) {
  ElementSet r;
  for (std::size_t e = 0; e < x.size(); ++e) {
    if (rng.bernoulli(x[e])) r.insert(static_cast<int>(e));
  }
  return r;
}

/// Controller plans of one big/small coin pattern.
struct SchemeVariant {
  std::vector<Constraint> constraints;
  std::vector<double> x;
  std::vector<ControllerPlan> plans;
  std::vector<int> lambdas;
  // Probability that an active element stays active after the reduction.
  std::vector<double> keep;
};

/// An instance with every trial-independent computation done: support
/// decompositions and, for each big/small coin pattern, the reduced
/// constraints and point.
///
/// A reduced knapsack becomes either the rank-1 partition matroid on its
/// big items (small items dropped) or the knapsack restricted to its small
/// items (big items dropped). Whenever any knapsack is reduced, the whole
/// point is halved so it lies in every reduced polytope.
class CrsScheme {
 public:
  explicit CrsScheme(CrsInstance inst) : inst_(std::move(inst)) {
    inst_.validate();
    const int q = inst_.reduced_count();
    if (q > kMaxReducedKnapsacks) {
      throw CapacityError("at most " + std::to_string(kMaxReducedKnapsacks) +
                          " knapsacks can be reduced");
    }
    for (std::size_t i = 0; i < inst_.constraints.size(); ++i) {
      if (inst_.reduced(i)) {
        reduced_.push_back(i);
        lambda_ += 2;
      } else {
        lambda_ += controller_lambda(inst_.constraints[i]);
      }
    }
    const std::uint32_t patterns = 1U << q;
    for (std::uint32_t p = 0; p < patterns; ++p) variants_.push_back(build(p));
  }

  const CrsInstance& instance() const { return inst_; }
  int size() const { return inst_.n; }
  /// Sum of controller blocking rates; reduced knapsacks count 2.
  int lambda() const { return lambda_; }
  int reduced_count() const { return static_cast<int>(reduced_.size()); }
  /// Without reduction the guarantee is on Pr[e in S | e in R(x)];
  /// with reduction it is on Pr[e in S].
  bool conditional_guarantee() const { return reduced_.empty(); }
  double bound(int e) const {
    const double base = 1.0 / (lambda_ + 1);
    if (reduced_.empty()) return base;
    return inst_.x[static_cast<std::size_t>(e)] * base /
           std::ldexp(1.0, reduced_count() + 1);
  }
  std::size_t variant_count() const { return variants_.size(); }
  const SchemeVariant& variant(std::uint32_t pattern) const {
    return variants_[pattern];
  }

 private:
  SchemeVariant build(std::uint32_t pattern) const {
    const int n = inst_.n;
    SchemeVariant v;
    v.x = inst_.x;
    v.keep.assign(static_cast<std::size_t>(n), 1.0);
    if (!reduced_.empty()) {
      ElementSet dropped;
      for (std::size_t r = 0; r < reduced_.size(); ++r) {
        const auto& k = std::get<KnapsackConstraint>(inst_.constraints[reduced_[r]]);
        const auto cls = classify_items(k);
        dropped = dropped | ((pattern >> r & 1U) ? cls.small : cls.big);
      }
      for (int e = 0; e < n; ++e) {
        const auto ue = static_cast<std::size_t>(e);
        if (dropped.contains(e)) {
          v.x[ue] = 0.0;
          v.keep[ue] = 0.0;
        } else {
          v.x[ue] *= 0.5;
          v.keep[ue] = 0.5;
        }
      }
    }
    std::size_t r = 0;
    for (std::size_t i = 0; i < inst_.constraints.size(); ++i) {
      const auto& c = inst_.constraints[i];
      if (!inst_.reduced(i)) {
        v.constraints.push_back(c);
        v.lambdas.push_back(controller_lambda(c));
      } else {
        const auto& k = std::get<KnapsackConstraint>(c);
        const auto cls = classify_items(k);
        if (pattern >> r & 1U) {
          v.constraints.push_back(Matroid::partition(n, {cls.big.to_vector()}, {1}));
          v.lambdas.push_back(1);
        } else {
          std::vector<double> sizes = k.sizes();
          for (int e : cls.big) sizes[static_cast<std::size_t>(e)] = 0.0;
          v.constraints.push_back(KnapsackConstraint(std::move(sizes)));
          v.lambdas.push_back(2);
        }
        ++r;
      }
    }
    for (const auto& c : v.constraints) v.plans.push_back(make_plan(c, v.x));
    return v;
  }

  CrsInstance inst_;
  std::vector<std::size_t> reduced_;
  int lambda_ = 0;
  std::vector<SchemeVariant> variants_;
};

struct RunOptions {
  bool trace = false;
  bool constituent_traces = false;
};

struct CrsRunResult {
  ElementSet selected;
  ElementSet active;
  // Active set after the reduction's subsampling; equals `active` otherwise.
  ElementSet effective_active;
  std::vector<int> permutation;
  std::uint32_t pattern = 0;
  bool feasible = true;
  // Elements kept by a post-filter (equals `selected` for the plain scheme).
  ElementSet filtered;
  std::optional<CharacteristicTrace> trace;
  std::vector<CharacteristicTrace> constituent_traces;
};

inline JointController build_joint(const SchemeVariant& v, Rng& rng) {
  JointController jc;
  const ElementSet all = ElementSet::full(static_cast<int>(v.x.size()));
  for (std::size_t i = 0; i < v.plans.size(); ++i) {
    jc.add(make_controller(v.plans[i], rng), all, v.lambdas[i]);
  }
  return jc;
}

namespace detail {

// Random-order scan. `keep(e)` decides whether an element accepted by the
// scheme also enters the filtered output; controllers are updated either way.
template <typename Keep>
void scan(JointController& jc, ElementSet active, std::span<const int> order,
          Rng& rng, const RunOptions& opt, CrsRunResult& out, Keep&& keep) {
  const int n = static_cast<int>(order.size());
  if (opt.trace) {
    out.trace.emplace(n);
    out.trace->block_initially(jc.blocked_set());
  }
  if (opt.constituent_traces) {
    for (std::size_t i = 0; i < jc.size(); ++i) {
      out.constituent_traces.emplace_back(n);
      out.constituent_traces.back().block_initially(jc.blocked_set_in(i));
    }
  }
  for (int t = 0; t < n; ++t) {
    const int e = order[static_cast<std::size_t>(t)];
    if (!active.contains(e) || jc.blocked(e)) continue;
    StepEvents joint;
    joint.taken.insert(e);
    for (std::size_t i = 0; i < jc.size(); ++i) {
      if (!jc.coverage(i).contains(e)) continue;
      const ElementSet newly = jc.accept_in(i, e, rng);
      joint.blocked = joint.blocked | newly;
      if (opt.constituent_traces) {
        auto& tr = out.constituent_traces[i];
        StepEvents ev;
        ev.taken.insert(e);
        for (int f : newly) {
          if (!tr.resolved(f)) ev.blocked.insert(f);
        }
        tr.record_step(t, ev);
      }
    }
    out.selected.insert(e);
    if (keep(e, out.filtered)) out.filtered.insert(e);
    if (opt.trace) {
      ElementSet fresh;
      for (int f : joint.blocked) {
        if (!out.trace->resolved(f)) fresh.insert(f);
      }
      joint.blocked = fresh;
      out.trace->record_step(t, joint);
    }
  }
}

}  // namespace detail

/// One run with the active set, coin pattern and order supplied by the
/// caller; controller randomness is drawn from rng.
template <typename Keep>
CrsRunResult run_crs_with(const CrsScheme& scheme, ElementSet active,
                          ElementSet effective_active, std::uint32_t pattern,
                          std::vector<int> order, Rng& rng,
                          const RunOptions& opt, Keep&& keep) {
  const auto& v = scheme.variant(pattern);
  CrsRunResult out;
  out.active = active;
  out.effective_active = effective_active;
  out.pattern = pattern;
  JointController jc = build_joint(v, rng);
  out.permutation = std::move(order);
  detail::scan(jc, effective_active, out.permutation, rng, opt, out, keep);
  out.feasible = is_feasible(scheme.instance().constraints, out.selected);
  return out;
}

/// One trial: R(x), coins and subsampling of the reduction, controllers,
/// then a uniformly random order.
template <typename Keep>
CrsRunResult run_crs_filtered(const CrsScheme& scheme, Rng& rng,
                              const RunOptions& opt, Keep&& keep) {
  const ElementSet active = sample_active_set(scheme.instance().x, rng);
  std::uint32_t pattern = 0;
  for (int r = 0; r < scheme.reduced_count(); ++r) {
    if (rng.bernoulli(0.5)) pattern |= 1U << r;
  }
  const auto& v = scheme.variant(pattern);
  ElementSet effective;
  for (int e : active) {
    const double k = v.keep[static_cast<std::size_t>(e)];
    if (k >= 1.0 || (k > 0.0 && rng.bernoulli(k))) effective.insert(e);
  }
  CrsRunResult out;
  out.active = active;
  out.effective_active = effective;
  out.pattern = pattern;
  JointController jc = build_joint(v, rng);
  out.permutation = rng.permutation(scheme.size());
  detail::scan(jc, effective, out.permutation, rng, opt, out, keep);
  out.feasible = is_feasible(scheme.instance().constraints, out.selected);
  return out;
}

inline CrsRunResult run_crs(const CrsScheme& scheme, Rng& rng,
                            const RunOptions& opt = {}) {
  return run_crs_filtered(scheme, rng, opt,
                          [](int, ElementSet) { return true; });
}

struct ElementAcceptance {
  ProportionEstimate conditional;    // accepted / active
  ProportionEstimate unconditional;  // accepted / trials
  double bound = 0.0;
  bool pass = true;
};

struct AcceptanceReport {
  std::uint64_t trials = 0;
  std::uint64_t infeasible = 0;
  bool conditional = true;
  std::vector<ElementAcceptance> elements;
  bool all_pass() const {
    if (infeasible != 0) return false;
    for (const auto& e : elements) {
      if (!e.pass) return false;
    }
    return true;
  }
};

/// Monte-Carlo estimate of each element's acceptance probability. Trial i
/// uses the stream derive_seed(master_seed, i), so the result does not
/// depend on `jobs`.
inline AcceptanceReport estimate_acceptance(const CrsScheme& scheme,
                                            std::uint64_t trials,
                                            std::uint64_t master_seed,
                                            int jobs = 1) {
  if (trials < 1) throw InputError("estimate_acceptance: trials must be >= 1");
  const int n = scheme.size();
  struct Counts {
    std::vector<std::uint64_t> active, accepted;
    std::uint64_t infeasible = 0;
  };
  std::vector<Counts> parts(static_cast<std::size_t>(std::max(jobs, 1)));
  parallel_chunks(trials, jobs, [&](std::uint64_t begin, std::uint64_t end,
                                    std::size_t chunk) {
    Counts c;
    c.active.assign(static_cast<std::size_t>(n), 0);
    c.accepted.assign(static_cast<std::size_t>(n), 0);
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(master_seed, i));
      const auto res = run_crs(scheme, rng);
      if (!res.feasible) ++c.infeasible;
      for (int e : res.active) ++c.active[static_cast<std::size_t>(e)];
      for (int e : res.selected) ++c.accepted[static_cast<std::size_t>(e)];
    }
    parts[chunk] = std::move(c);
  });

  AcceptanceReport rep;
  rep.trials = trials;
  rep.conditional = scheme.conditional_guarantee();
  rep.elements.resize(static_cast<std::size_t>(n));
  for (const auto& c : parts) {
    rep.infeasible += c.infeasible;
    for (int e = 0; e < n; ++e) {
      auto& el = rep.elements[static_cast<std::size_t>(e)];
      el.conditional.successes += c.accepted[static_cast<std::size_t>(e)];
      el.conditional.trials += c.active[static_cast<std::size_t>(e)];
      el.unconditional.successes += c.accepted[static_cast<std::size_t>(e)];
    }
  }
  for (int e = 0; e < n; ++e) {
    auto& el = rep.elements[static_cast<std::size_t>(e)];
    el.unconditional.trials = trials;
    el.bound = scheme.bound(e);
    const auto& est = rep.conditional ? el.conditional : el.unconditional;
    // An element that is never active carries no evidence either way.
    el.pass = !est.defined() ||
              passes_lower_bound(est.mean(), est.std_err(), el.bound);
  }
  return rep;
}

inline constexpr int kBruteForceCap = 6;

namespace detail {

// Exact acceptance probabilities for matroid-only instances.
//
// Controllers are drawn lazily: an element's controller matters only at its
// own turn (is e still in its set?) and when it is accepted (it fixes the
// source set of the exchange mappings). Family evolution depends only on
// the accepted elements' controllers, so drawing each controller at its
// owner's turn gives the same distribution as drawing all of them upfront.
class BruteForce {
 public:
  BruteForce(const CrsScheme& scheme) : scheme_(scheme) {
    const auto& v = scheme.variant(0);
    for (const auto& p : v.plans) {
      plans_.push_back(std::get<std::shared_ptr<const MatroidPlan>>(p).get());
    }
  }

  std::vector<double> solve() {
    std::vector<std::vector<ElementSet>> families;
    for (const auto* p : plans_) {
      std::vector<ElementSet> f;
      for (const auto& en : p->decomposition().entries) f.push_back(en.set);
      families.push_back(std::move(f));
    }
    return value(ElementSet::full(scheme_.size()), families);
  }

 private:
  using Families = std::vector<std::vector<ElementSet>>;

  std::vector<double> value(ElementSet remaining, const Families& fam) {
    const int n = scheme_.size();
    std::vector<std::uint64_t> key{remaining.bits()};
    for (const auto& f : fam) {
      for (auto s : f) key.push_back(s.bits());
    }
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
    if (remaining.empty()) return memo_[key] = acc;
    const double pick = 1.0 / remaining.size();
    for (int e : remaining) {
      const ElementSet rest = remaining.without(e);
      const double xe = scheme_.instance().x[static_cast<std::size_t>(e)];
      // Inactive, or active but blocked: nothing changes.
      double idle = 1.0 - xe;
      std::vector<std::pair<double, Families>> branches;
      if (xe > 0.0) enumerate(e, xe, fam, 0, 1.0, {}, idle, branches);
      if (idle > 0.0) {
        const auto sub = value(rest, fam);
        for (int f = 0; f < n; ++f) {
          acc[static_cast<std::size_t>(f)] += pick * idle * sub[static_cast<std::size_t>(f)];
        }
      }
      for (const auto& [prob, next] : branches) {
        acc[static_cast<std::size_t>(e)] += pick * prob;
        const auto sub = value(rest, next);
        for (int f = 0; f < n; ++f) {
          acc[static_cast<std::size_t>(f)] += pick * prob * sub[static_cast<std::size_t>(f)];
        }
      }
    }
    return memo_[key] = acc;
  }

  // Walks over the product of controller choices of e in every constituent.
  void enumerate(int e, double xe, const Families& fam, std::size_t i,
                 double prob, std::vector<ElementSet> sources, double& idle,
                 std::vector<std::pair<double, Families>>& branches) {
    if (i == plans_.size()) {
      Families next = fam;
      for (std::size_t c = 0; c < plans_.size(); ++c) {
        const Matroid& m = plans_[c]->matroid();
        for (auto& b : next[c]) {
          if (b.contains(e)) continue;
          if (m.independent(b.with(e))) {
            b = b.with(e);
          } else {
            const int f = build_exchange_mapping(m, sources[c], b)(e);
            b = b.without(f).with(e);
          }
        }
      }
      branches.emplace_back(xe * prob, std::move(next));
      return;
    }
    const auto cand = plans_[i]->candidates(e);
    const auto w = plans_[i]->weights(e);
    double total = 0.0;
    for (double v : w) total += v;
    if (cand.empty()) {
      idle += xe * prob;
      return;
    }
    for (std::size_t k = 0; k < cand.size(); ++k) {
      const double p = prob * w[k] / total;
      const ElementSet own = fam[i][static_cast<std::size_t>(cand[k])];
      if (!own.contains(e)) {
        idle += xe * p;
        continue;
      }
      sources.push_back(own);
      enumerate(e, xe, fam, i + 1, p, sources, idle, branches);
      sources.pop_back();
    }
  }

  const CrsScheme& scheme_;
  std::vector<const MatroidPlan*> plans_;
  std::map<std::vector<std::uint64_t>, std::vector<double>> memo_;
};

}  // namespace detail

/// Exact Pr[e in S | e in R(x)] by enumerating orders, activity and
/// controller choices. Matroid constraints only; NaN where x_e = 0.
inline std::vector<double> brute_force_acceptance(const CrsScheme& scheme) {
  for (const auto& c : scheme.instance().constraints) {
    if (!is_matroid(c)) {
      throw InputError("brute_force_acceptance: knapsack constraints carry "
                       "continuous randomness and are not supported");
    }
  }
  require_cap(scheme.size(), enumeration_cap(kBruteForceCap),
              "brute_force_acceptance");
  detail::BruteForce bf(scheme);
  auto p = bf.solve();
  for (int e = 0; e < scheme.size(); ++e) {
    const double xe = scheme.instance().x[static_cast<std::size_t>(e)];
    p[static_cast<std::size_t>(e)] =
        xe > 0.0 ? p[static_cast<std::size_t>(e)] / xe : std::nan("");
  }
  return p;
}

}  // namespace rocrs

#endif  // ROCRS_CRS_HPP
