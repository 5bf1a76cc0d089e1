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

#ifndef ROCRS_DIAGNOSTICS_HPP
#define ROCRS_DIAGNOSTICS_HPP

#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "rocrs/crs.hpp"
#include "rocrs/element_set.hpp"
#include "rocrs/parallel.hpp"
#include "rocrs/stats.hpp"
#include "rocrs/trace.hpp"

namespace rocrs {

/// Aggregates characteristic traces over trials.
///
/// Blocking rate: for each (e, t), among trials where e is in the
/// conditioning set and Y_e^t = 1, the fraction with Z_e^{t+1} = 1. A
/// lambda-bounded scheme keeps it at most lambda / (n - t).
///
/// Stopping-time value: (1 + lambda) S_e^tau + Y_e^tau at the first tau with
/// Y_e^tau = 0 (tau = n when e stays undecided); its mean is at least 1.
class TraceAccumulator {
 public:
  TraceAccumulator() = default;
  TraceAccumulator(int n, double lambda)
      : n_(n),
        lambda_(lambda),
        exposed_(static_cast<std::size_t>(n * n), 0),
        blocked_(static_cast<std::size_t>(n * n), 0),
        count_(static_cast<std::size_t>(n), 0),
        sum_(static_cast<std::size_t>(n), 0.0),
        sum_sq_(static_cast<std::size_t>(n), 0.0) {}

  int size() const { return n_; }
  double lambda() const { return lambda_; }

  /// Blocking exposures stop at `horizon`'s stopping time when given (a
  /// constituent stops mattering once the joint fate of e is known).
  void add(const CharacteristicTrace& tr, ElementSet condition,
           const CharacteristicTrace* horizon = nullptr) {
    for (int e : condition) {
      const int tau = tr.stopping_time(e);
      const int stop = horizon == nullptr
                           ? tau
                           : std::min(tau, horizon->stopping_time(e));
      for (int t = 0; t < std::min(stop, n_); ++t) {
        ++exposed_[cell(e, t)];
      }
      const int z = tr.blocked_at(e);
      if (z > 0 && z == tau && z <= stop) ++blocked_[cell(e, z - 1)];
      const double v = (1.0 + lambda_) * tr.S(e, tau) + tr.Y(e, tau);
      ++count_[static_cast<std::size_t>(e)];
      sum_[static_cast<std::size_t>(e)] += v;
      sum_sq_[static_cast<std::size_t>(e)] += v * v;
    }
  }

  void merge(const TraceAccumulator& o) {
    for (std::size_t i = 0; i < exposed_.size(); ++i) {
      exposed_[i] += o.exposed_[i];
      blocked_[i] += o.blocked_[i];
    }
    for (std::size_t e = 0; e < count_.size(); ++e) {
      count_[e] += o.count_[e];
      sum_[e] += o.sum_[e];
      sum_sq_[e] += o.sum_sq_[e];
    }
  }

  ProportionEstimate blocking(int e, int t) const {
    return {blocked_[cell(e, t)], exposed_[cell(e, t)]};
  }
  double blocking_bound(int t) const { return lambda_ / (n_ - t); }
  bool blocking_pass(int e, int t) const {
    const auto est = blocking(e, t);
    if (!est.defined()) return true;
    return est.mean() <= blocking_bound(t) + kStdErrMargin * est.std_err();
  }

  MeanEstimate stopping_value(int e) const {
    MeanEstimate m;
    const auto ue = static_cast<std::size_t>(e);
    m.count = count_[ue];
    if (m.count == 0) return m;
    const double c = static_cast<double>(m.count);
    m.mean = sum_[ue] / c;
    if (m.count > 1) {
      const double var = std::max(0.0, (sum_sq_[ue] - c * m.mean * m.mean) / (c - 1));
      m.std_err = std::sqrt(var / c);
    }
    return m;
  }
  bool stopping_pass(int e) const {
    const auto m = stopping_value(e);
    return m.count == 0 || passes_lower_bound(m.mean, m.std_err, 1.0);
  }

  bool all_pass() const {
    for (int e = 0; e < n_; ++e) {
      if (!stopping_pass(e)) return false;
      for (int t = 0; t < n_; ++t) {
        if (!blocking_pass(e, t)) return false;
      }
    }
    return true;
  }

 private:
  std::size_t cell(int e, int t) const {
    return static_cast<std::size_t>(e * n_ + t);
  }

  int n_ = 0;
  double lambda_ = 0.0;
  std::vector<std::uint64_t> exposed_, blocked_, count_;
  std::vector<double> sum_, sum_sq_;
};

/// Checks Z = max_i Z_i, S = min_i S_i, Y = min_i Y_i and Y = 1 - S - Z at
/// every (element, step). Returns the number of violating cells.
inline std::uint64_t joint_relation_violations(
    const CharacteristicTrace& joint,
    std::span<const CharacteristicTrace> parts) {
  std::uint64_t bad = 0;
  for (int e = 0; e < joint.size(); ++e) {
    for (int t = 0; t <= joint.steps(); ++t) {
      int zmax = 0, smin = 1, ymin = 1;
      for (const auto& p : parts) {
        zmax = std::max(zmax, p.Z(e, t));
        smin = std::min(smin, p.S(e, t));
        ymin = std::min(ymin, p.Y(e, t));
      }
      const int s = joint.S(e, t), z = joint.Z(e, t), y = joint.Y(e, t);
      if (parts.empty()) {
        zmax = z;
        smin = s;
        ymin = y;
      }
      if (z != zmax || s != smin || y != ymin || y != 1 - s - z) ++bad;
    }
  }
  return bad;
}

struct DiagnosticsReport {
  std::uint64_t trials = 0;
  std::uint64_t relation_violations = 0;
  std::uint64_t infeasible = 0;
  TraceAccumulator joint;
  std::vector<TraceAccumulator> constituents;

  bool all_pass() const {
    if (relation_violations != 0 || infeasible != 0) return false;
    if (!joint.all_pass()) return false;
    for (const auto& c : constituents) {
      if (!c.all_pass()) return false;
    }
    return true;
  }
};

/// Traced CR runs. The joint trace is checked against lambda = the scheme's
/// total rate, constituent traces against their own rate; all conditioned on
/// the element being active after any reduction subsampling. Constituent
/// accumulators are only kept when the scheme has no reduction, since the
/// constituents then do not change between trials.
inline DiagnosticsReport run_diagnostics(const CrsScheme& scheme,
                                         std::uint64_t trials,
                                         std::uint64_t master_seed, int jobs = 1) {
  const int n = scheme.size();
  const bool per_part = scheme.reduced_count() == 0;
  const auto& v0 = scheme.variant(0);
  auto fresh = [&] {
    DiagnosticsReport r;
    r.joint = TraceAccumulator(n, scheme.lambda());
    if (per_part) {
      for (int l : v0.lambdas) r.constituents.emplace_back(n, l);
    }
    return r;
  };
  std::vector<DiagnosticsReport> parts(static_cast<std::size_t>(std::max(jobs, 1)));
  parallel_chunks(trials, jobs, [&](std::uint64_t begin, std::uint64_t end,
                                    std::size_t chunk) {
    DiagnosticsReport r = fresh();
    RunOptions opt;
    opt.trace = true;
    opt.constituent_traces = true;
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(master_seed, i));
      const auto res = run_crs(scheme, rng, opt);
      ++r.trials;
      if (!res.feasible) ++r.infeasible;
      r.relation_violations +=
          joint_relation_violations(*res.trace, res.constituent_traces);
      r.joint.add(*res.trace, res.effective_active);
      if (per_part) {
        for (std::size_t c = 0; c < r.constituents.size(); ++c) {
          r.constituents[c].add(res.constituent_traces[c], res.effective_active,
                                &*res.trace);
        }
      }
    }
    parts[chunk] = std::move(r);
  });
  DiagnosticsReport out = fresh();
  for (const auto& p : parts) {
    out.trials += p.trials;
    out.infeasible += p.infeasible;
    out.relation_violations += p.relation_violations;
    out.joint.merge(p.joint);
    for (std::size_t c = 0; c < out.constituents.size(); ++c) {
      out.constituents[c].merge(p.constituents[c]);
    }
  }
  return out;
}

/// CSV rows trial,element,step,S,Z,Y for every element and step 0..n.
inline void write_trace_csv(std::ostream& os, std::uint64_t trial,
                            const CharacteristicTrace& tr) {
  for (int e = 0; e < tr.size(); ++e) {
    for (int t = 0; t <= tr.steps(); ++t) {
      os << trial << ',' << e << ',' << t << ',' << tr.S(e, t) << ','
         << tr.Z(e, t) << ',' << tr.Y(e, t) << '\n';
    }
  }
}

}  // namespace rocrs

#endif  // ROCRS_DIAGNOSTICS_HPP
