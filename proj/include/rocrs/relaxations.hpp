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


#ifndef ROCRS_RELAXATIONS_HPP
#define ROCRS_RELAXATIONS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rocrs/constraint.hpp"
#include "rocrs/error.hpp"
#include "rocrs/instances.hpp"
#include "rocrs/lp.hpp"
#include "rocrs/polytope.hpp"
#include "rocrs/random.hpp"
#include "rocrs/stats.hpp"
#include "rocrs/submodular.hpp"

namespace rocrs {

inline constexpr int kMaxBmumdVars = 2000;
inline constexpr int kFPlusCap = 12;
inline constexpr int kProbingMpCap = 8;

namespace detail {

// Zeroes round-off below 1e-12 and shrinks the point until every row of
// `lp` holds exactly, so downstream decompositions see a feasible point.
inline std::vector<double> clean_solution(const LinearProgram& lp,
                                          std::vector<double> v) {
  for (auto& a : v) {
    if (a < 1e-12) a = 0.0;
  }
  for (int round = 0; round < 8; ++round) {
    const double viol = lp.max_violation(v);
    if (viol <= 0.0) break;
    const double s = 1.0 - 2.0 * viol - 1e-15;
    for (auto& a : v) a *= s;
  }
  return v;
}

inline LpSolution solve_or_throw(const LinearProgram& lp, const std::string& what) {
  auto sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw LogicError(what + ": LP " + to_string(sol.status) +
                     " although 0 is feasible and the region is bounded");
  }
  return sol;
}

}  // namespace detail

/// The auction LP over copy-clients. Variable j stands for x_{c,p}, the
/// probability of offering item c at price p; only prices p >= 1 with
/// Pr[v_c >= p] > 0 get a variable.
struct BmumdLp {
  struct Var {
    int item = 0;
    int price = 0;
    double tail = 0.0;  // Pr[v_item >= price]
  };
  LinearProgram lp;
  std::vector<Var> vars;
};

inline BmumdLp build_bmumd_lp(const AuctionInstance& inst) {
  inst.validate();
  BmumdLp out;
  std::vector<std::vector<std::pair<int, double>>> expand(
      static_cast<std::size_t>(inst.items));
  for (int c = 0; c < inst.items; ++c) {
    for (int p = 1; p <= inst.max_value(c); ++p) {
      const double t = inst.tail(c, p);
      if (t <= 0.0) continue;
      if (static_cast<int>(out.vars.size()) >= kMaxBmumdVars) {
        throw CapacityError("auction LP: more than " + std::to_string(kMaxBmumdVars) +
                            " (item, price) variables");
      }
      const int j = out.lp.add_var(p * t, LinearProgram::kUnbounded);
      out.vars.push_back({c, p, t});
      expand[static_cast<std::size_t>(c)].emplace_back(j, t);
    }
  }
  for (int c = 0; c < inst.items; ++c) {
    LpRow row;
    for (const auto& [j, t] : expand[static_cast<std::size_t>(c)]) row.terms.emplace_back(j, 1.0);
    row.rhs = 1.0;
    if (!row.terms.empty()) out.lp.add_row(std::move(row));
  }
  for (const auto& group : inst.clients) {
    LpRow row;
    for (int c : group) {
      for (const auto& term : expand[static_cast<std::size_t>(c)]) row.terms.push_back(term);
    }
    row.rhs = 1.0;
    if (!row.terms.empty()) out.lp.add_row(std::move(row));
  }
  PolytopeSystem ps(inst.items);
  for (const auto& c : inst.constraints) ps.add(c);
  ps.append_rows_mapped(out.lp, expand);
  return out;
}

/// Optimal LP point as a table x[c][p] (p = 0..B_c, x[c][0] = 0) together
/// with z_c = sum_p x_{c,p} Pr[v_c >= p].
struct BmumdSolution {
  double objective = 0.0;
  std::vector<std::vector<double>> x;
  std::vector<double> z;
};

inline BmumdSolution solve_bmumd(const AuctionInstance& inst) {
  const auto built = build_bmumd_lp(inst);
  BmumdSolution out;
  out.x.resize(static_cast<std::size_t>(inst.items));
  for (int c = 0; c < inst.items; ++c) {
    out.x[static_cast<std::size_t>(c)].assign(static_cast<std::size_t>(inst.max_value(c) + 1), 0.0);
  }
  out.z.assign(static_cast<std::size_t>(inst.items), 0.0);
  if (built.vars.empty()) return out;
  const auto sol = detail::solve_or_throw(built.lp, "auction LP");
  out.objective = sol.objective;
  const auto v = detail::clean_solution(built.lp, sol.values);
  for (std::size_t j = 0; j < built.vars.size(); ++j) {
    const auto& var = built.vars[j];
    out.x[static_cast<std::size_t>(var.item)][static_cast<std::size_t>(var.price)] = v[j];
    out.z[static_cast<std::size_t>(var.item)] += v[j] * var.tail;
  }
  return out;
}

/// max sum_e E[v_e] x_e s.t. p^i . x in P(M_i) for every row i, x in [0,1].
inline LinearProgram build_setpacking_lp(const PackingInstance& inst) {
  inst.validate();
  LinearProgram lp(inst.n);
  for (int e = 0; e < inst.n; ++e) lp.set_cost(e, inst.expected_value(e));
  PolytopeSystem ps(inst.n);
  for (int i = 0; i < inst.row_count(); ++i) {
    std::vector<double> scale(static_cast<std::size_t>(inst.n));
    for (int e = 0; e < inst.n; ++e) scale[static_cast<std::size_t>(e)] = inst.marginal(e, i);
    ps.add_matroid(inst.row_matroids[static_cast<std::size_t>(i)], std::move(scale));
  }
  ps.append_rows(lp);
  return lp;
}

struct FractionalSolution {
  double objective = 0.0;
  std::vector<double> x;
};

inline FractionalSolution solve_setpacking(const PackingInstance& inst) {
  const auto lp = build_setpacking_lp(inst);
  const auto sol = detail::solve_or_throw(lp, "set packing LP");
  return {sol.objective, detail::clean_solution(lp, sol.values)};
}

namespace detail {

// Adds the distribution variables alpha_A (one per subset, cost f(A)) and
// the rows sum alpha <= 1; returns the index of alpha_0.
inline int add_distribution_vars(LinearProgram& lp, const SubmodularOracle& f) {
  const int n = f.size();
  const int first = lp.var_count();
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t a = 0; a < subsets; ++a) {
    lp.add_var(f(ElementSet(a)), LinearProgram::kUnbounded);
  }
  LpRow total;
  for (std::uint64_t a = 0; a < subsets; ++a) {
    total.terms.emplace_back(first + static_cast<int>(a), 1.0);
  }
  total.rhs = 1.0;
  lp.add_row(std::move(total));
  return first;
}

inline LpRow marginal_row(int first, int n, int j) {
  LpRow row;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t a = 0; a < subsets; ++a) {
    if ((a >> j) & 1U) row.terms.emplace_back(first + static_cast<int>(a), 1.0);
  }
  return row;
}

}  // namespace detail

/// Concave closure
///   f+(y) = max { sum_A alpha_A f(A) : sum alpha <= 1,
///                 sum_{A containing j} alpha_A <= y_j, alpha >= 0 }
/// solved as an LP over all 2^n subsets.
inline double f_plus(const SubmodularOracle& f, std::span<const double> y) {
  const int n = f.size();
  require_cap(n, enumeration_cap(kFPlusCap), "f_plus");
  if (static_cast<int>(y.size()) != n) throw InputError("f_plus: vector length mismatch");
  LinearProgram lp(0);
  const int first = detail::add_distribution_vars(lp, f);
  for (int j = 0; j < n; ++j) {
    auto row = detail::marginal_row(first, n, j);
    row.rhs = y[static_cast<std::size_t>(j)];
    lp.add_row(std::move(row));
  }
  return detail::solve_or_throw(lp, "f_plus").objective;
}

namespace detail {

inline void add_probing_rows(LinearProgram& lp, const ProbingInstance& inst, int offset) {
  PolytopeSystem outer(inst.n);
  for (const auto& c : inst.outer) outer.add(c);
  outer.append_rows(lp, offset);
  PolytopeSystem inner(inst.n);
  for (const auto& c : inst.inner) inner.add(c, inst.p);
  inner.append_rows(lp, offset);
}

}  // namespace detail

/// Exact optimum of max { f+(p x) : x in P(outer), p x in P(inner), x in
/// [0,1] } as one LP in (alpha, x).
inline FractionalSolution probing_mp_optimum(const ProbingInstance& inst) {
  inst.validate();
  const int n = inst.n;
  require_cap(n, enumeration_cap(kProbingMpCap), "probing_mp_optimum");
  LinearProgram lp(0);
  const int first = detail::add_distribution_vars(lp, inst.f);
  const int offset = lp.var_count();
  for (int e = 0; e < n; ++e) lp.add_var(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    auto row = detail::marginal_row(first, n, j);
    row.terms.emplace_back(offset + j, -inst.p[static_cast<std::size_t>(j)]);
    row.rhs = 0.0;
    lp.add_row(std::move(row));
  }
  detail::add_probing_rows(lp, inst, offset);
  const auto sol = detail::solve_or_throw(lp, "probing relaxation");
  FractionalSolution out;
  out.objective = sol.objective;
  out.x.assign(sol.values.begin() + offset, sol.values.end());
  return out;
}

struct ProbingMpSolution {
  std::vector<double> x;
  std::vector<double> y;  // p * x
  GreedyTrajectory trajectory;
};

/// Feasible x for the probing relaxation from measured continuous greedy
/// on y = p x. In y-space the polytope is
///   { y : y / p in P(outer), y in P(inner), y <= p },
/// elements with p_e = 0 are pinned to 0. eps sets the step count
/// ceil(5 / eps).
inline ProbingMpSolution solve_probing_mp(const ProbingInstance& inst, double eps,
                                          Rng& rng) {
  inst.validate();
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("solve_probing_mp: eps must lie in (0, 1)");
  const int n = inst.n;
  std::vector<double> inv(static_cast<std::size_t>(n), 0.0);
  for (int e = 0; e < n; ++e) {
    const double p = inst.p[static_cast<std::size_t>(e)];
    if (p > 0.0) inv[static_cast<std::size_t>(e)] = 1.0 / p;
  }
  PolytopeSystem ps(n);
  for (const auto& c : inst.outer) ps.add(c, inv);
  for (const auto& c : inst.inner) ps.add(c);
  for (int e = 0; e < n; ++e) ps.set_upper(e, inst.p[static_cast<std::size_t>(e)]);
  GreedyOptions opt;
  opt.steps = static_cast<int>(std::ceil(5.0 / eps));
  ProbingMpSolution out;
  out.trajectory = measured_continuous_greedy(inst.f, ps, opt, rng);
  out.y = out.trajectory.result();
  out.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int e = 0; e < n; ++e) {
    const auto i = static_cast<std::size_t>(e);
    if (inv[i] > 0.0) out.x[i] = std::min(1.0, out.y[i] * inv[i]);
  }
  return out;
}

}  // namespace rocrs

#endif  // ROCRS_RELAXATIONS_HPP
