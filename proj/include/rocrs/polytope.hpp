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

#ifndef ROCRS_POLYTOPE_HPP
#define ROCRS_POLYTOPE_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rocrs/constraint.hpp"
#include "rocrs/error.hpp"
#include "rocrs/lp.hpp"
#include "rocrs/matroid.hpp"

namespace rocrs {

/// Intersection of scaled matroid polytopes, knapsack rows and per-element
/// upper bounds:
///   { x >= 0 : (s_i . x) in P(M_i), sum_e a_e x_e <= 1, x <= u }.
/// Matroid rows are enumerated once at construction.
class PolytopeSystem {
 public:
  explicit PolytopeSystem(int n)
      : n_(n), upper_(static_cast<std::size_t>(n), 1.0) {
    require_ground_size(n);
  }

  int size() const { return n_; }

  void add_matroid(const Matroid& m, std::vector<double> scale = {}) {
    check(m.size());
    if (scale.empty()) scale.assign(static_cast<std::size_t>(n_), 1.0);
    if (static_cast<int>(scale.size()) != n_) {
      throw InputError("polytope system: scale length mismatch");
    }
    Block b{m, std::move(scale), polytope_rows(m)};
    blocks_.push_back(std::move(b));
  }
  void add_knapsack(const KnapsackConstraint& k, std::span<const double> scale = {}) {
    check(k.size());
    std::vector<double> a = k.sizes();
    if (!scale.empty()) {
      for (std::size_t e = 0; e < a.size(); ++e) a[e] *= scale[e];
    }
    knapsacks_.push_back(std::move(a));
  }
  void add(const Constraint& c, std::vector<double> scale = {}) {
    if (const auto* m = std::get_if<Matroid>(&c)) {
      add_matroid(*m, std::move(scale));
    } else {
      add_knapsack(std::get<KnapsackConstraint>(c), scale);
    }
  }
  void set_upper(int e, double u) { upper_.at(static_cast<std::size_t>(e)) = u; }
  const std::vector<double>& upper() const { return upper_; }

  bool contains(std::span<const double> x, double tol) const {
    for (int e = 0; e < n_; ++e) {
      const double v = x[static_cast<std::size_t>(e)];
      if (v < -tol || v > upper_[static_cast<std::size_t>(e)] + tol) return false;
    }
    std::vector<double> y(static_cast<std::size_t>(n_));
    for (const auto& b : blocks_) {
      for (std::size_t e = 0; e < y.size(); ++e) y[e] = b.scale[e] * x[e];
      if (!in_polytope(b.matroid, y, tol)) return false;
    }
    for (const auto& a : knapsacks_) {
      double s = 0.0;
      for (std::size_t e = 0; e < a.size(); ++e) s += a[e] * x[e];
      if (s > 1.0 + tol) return false;
    }
    return true;
  }

  /// Appends the rows of the system over variables offset..offset+n-1.
  void append_rows(LinearProgram& lp, int offset = 0) const {
    std::vector<std::vector<std::pair<int, double>>> expand(static_cast<std::size_t>(n_));
    for (int e = 0; e < n_; ++e) {
      expand[static_cast<std::size_t>(e)].emplace_back(offset + e, 1.0);
    }
    append_rows_mapped(lp, expand);
    for (int e = 0; e < n_; ++e) {
      lp.set_upper(offset + e, upper_[static_cast<std::size_t>(e)]);
    }
  }

  /// Appends the constraint rows with element e standing for the linear
  /// form sum_{(j, a) in expand[e]} a * var_j. Upper bounds are not emitted.
  void append_rows_mapped(
      LinearProgram& lp,
      const std::vector<std::vector<std::pair<int, double>>>& expand) const {
    if (static_cast<int>(expand.size()) != n_) {
      throw InputError("polytope system: expansion length mismatch");
    }
    auto push = [&](LpRow& row, int e, double coef) {
      if (coef == 0.0) return;
      for (auto [j, a] : expand[static_cast<std::size_t>(e)]) {
        row.terms.emplace_back(j, coef * a);
      }
    };
    for (const auto& b : blocks_) {
      for (const auto& r : b.rows) {
        LpRow row;
        for (int e : r.set) push(row, e, b.scale[static_cast<std::size_t>(e)]);
        if (row.terms.empty()) continue;
        row.rhs = r.rank;
        lp.add_row(std::move(row));
      }
    }
    for (const auto& a : knapsacks_) {
      LpRow row;
      for (int e = 0; e < n_; ++e) push(row, e, a[static_cast<std::size_t>(e)]);
      row.rhs = 1.0;
      if (!row.terms.empty()) lp.add_row(std::move(row));
    }
  }

  /// Plain matroid with unit scale and unit bounds: greedy is exact.
  bool single_unit_matroid() const {
    if (blocks_.size() != 1 || !knapsacks_.empty()) return false;
    for (int e = 0; e < n_; ++e) {
      if (blocks_[0].scale[static_cast<std::size_t>(e)] != 1.0) return false;
      if (upper_[static_cast<std::size_t>(e)] < 1.0) return false;
    }
    return true;
  }
  const Matroid& first_matroid() const { return blocks_.front().matroid; }

 private:
  struct Block {
    Matroid matroid;
    std::vector<double> scale;
    std::vector<RankRow> rows;
  };

  void check(int size) const {
    if (size != n_) throw InputError("polytope system: ground set size mismatch");
  }

  int n_;
  std::vector<double> upper_;
  std::vector<Block> blocks_;
  std::vector<std::vector<double>> knapsacks_;
};

/// A maximizer of w . x over the system (a vertex). Matroid greedy on the
/// positive weights for a single unit matroid, the zero vector when no
/// weight is positive, otherwise the enumerated LP.
inline std::vector<double> linear_maximize(const PolytopeSystem& p,
                                           std::span<const double> w) {
  const int n = p.size();
  if (static_cast<int>(w.size()) != n) {
    throw InputError("linear_maximize: weight length mismatch");
  }
  for (double v : w) {
    if (!std::isfinite(v)) throw InputError("linear_maximize: non-finite weight");
  }
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  if (std::none_of(w.begin(), w.end(), [](double v) { return v > 0.0; })) {
    return x;
  }
  if (p.single_unit_matroid()) {
    std::vector<int> order;
    for (int e = 0; e < n; ++e) {
      if (w[static_cast<std::size_t>(e)] > 0.0) order.push_back(e);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return w[static_cast<std::size_t>(a)] > w[static_cast<std::size_t>(b)];
    });
    for (int e : p.first_matroid().greedy_basis(order)) {
      x[static_cast<std::size_t>(e)] = 1.0;
    }
    return x;
  }
  LinearProgram lp(n);
  for (int e = 0; e < n; ++e) lp.set_cost(e, w[static_cast<std::size_t>(e)]);
  p.append_rows(lp);
  const auto sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw LogicError(std::string("linear_maximize: LP ") + to_string(sol.status) +
                     " although the polytope contains 0 and is bounded");
  }
  return sol.values;
}

}  // namespace rocrs

#endif  // ROCRS_POLYTOPE_HPP
