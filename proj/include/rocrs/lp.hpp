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

#ifndef ROCRS_LP_HPP
#define ROCRS_LP_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rocrs/error.hpp"

namespace rocrs {

inline constexpr double kLpTol = 1e-7;
inline constexpr int kMaxLpRows = 5000;
inline constexpr int kMaxLpVars = 5000;
inline constexpr std::uint64_t kMaxLpCells = 30'000'000;

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LpRow {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

/// maximize c.x subject to rows, 0 <= x_j <= upper_j (upper may be +inf).
class LinearProgram {
 public:
  static constexpr double kUnbounded = std::numeric_limits<double>::infinity();

  LinearProgram() = default;
  explicit LinearProgram(int vars, double upper = 1.0)
      : objective_(static_cast<std::size_t>(vars), 0.0),
        upper_(static_cast<std::size_t>(vars), upper) {}

  int var_count() const { return static_cast<int>(objective_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }

  int add_var(double cost = 0.0, double upper = 1.0) {
    objective_.push_back(cost);
    upper_.push_back(upper);
    return var_count() - 1;
  }
  void set_cost(int j, double c) { objective_.at(static_cast<std::size_t>(j)) = c; }
  void set_upper(int j, double u) { upper_.at(static_cast<std::size_t>(j)) = u; }
  void add_row(LpRow row) {
    for (auto [j, a] : row.terms) {
      if (j < 0 || j >= var_count()) {
        throw InputError("linear program: row references variable " +
                         std::to_string(j));
      }
      if (!std::isfinite(a)) throw InputError("linear program: non-finite coefficient");
    }
    if (!std::isfinite(row.rhs)) throw InputError("linear program: non-finite rhs");
    rows_.push_back(std::move(row));
  }

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<LpRow>& rows() const { return rows_; }

  /// Largest violation of a row or bound by `x`.
  double max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      worst = std::max(worst, -x[j]);
      if (std::isfinite(upper_[j])) worst = std::max(worst, x[j] - upper_[j]);
    }
    for (const auto& r : rows_) {
      double lhs = 0.0;
      for (auto [j, a] : r.terms) lhs += a * x[static_cast<std::size_t>(j)];
      const double d = lhs - r.rhs;
      if (r.relation == Relation::kLessEqual) worst = std::max(worst, d);
      if (r.relation == Relation::kGreaterEqual) worst = std::max(worst, -d);
      if (r.relation == Relation::kEqual) worst = std::max(worst, std::abs(d));
    }
    return worst;
  }

  double evaluate(const std::vector<double>& x) const {
    double v = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) v += objective_[j] * x[j];
    return v;
  }

 private:
  std::vector<double> objective_;
  std::vector<double> upper_;
  std::vector<LpRow> rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;
  double objective = 0.0;
  std::uint64_t pivots = 0;
};

namespace detail {

// Dense tableau. Column layout: structural vars, slack/surplus, artificials,
// then the right-hand side. Row 0..m-1 are constraints; `cost` is the
// objective row holding reduced costs (maximization: enter on positive).
class Tableau {
 public:
  Tableau(int m, int cols) : m_(m), cols_(cols), a_(static_cast<std::size_t>(m) * (cols + 1), 0.0),
                             cost_(static_cast<std::size_t>(cols + 1), 0.0), basis_(static_cast<std::size_t>(m), -1) {}

  double& at(int r, int c) { return a_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  double at(int r, int c) const { return a_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }
  double& cost(int c) { return cost_[static_cast<std::size_t>(c)]; }
  int& basis(int r) { return basis_[static_cast<std::size_t>(r)]; }
  int basis(int r) const { return basis_[static_cast<std::size_t>(r)]; }
  int rows() const { return m_; }
  int cols() const { return cols_; }

  void pivot(int r, int c) {
    const double p = at(r, c);
    for (int k = 0; k <= cols_; ++k) at(r, k) /= p;
    at(r, c) = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (int k = 0; k <= cols_; ++k) at(i, k) -= f * at(r, k);
      at(i, c) = 0.0;
    }
    const double f = cost_[static_cast<std::size_t>(c)];
    if (f != 0.0) {
      for (int k = 0; k <= cols_; ++k) cost_[static_cast<std::size_t>(k)] -= f * at(r, k);
      cost_[static_cast<std::size_t>(c)] = 0.0;
    }
    basis(r) = c;
  }

  // Bland's rule. `allowed` limits entering columns. Returns false when
  // the objective is unbounded.
  bool optimize(int allowed, std::uint64_t& pivots) {
    constexpr double eps = 1e-10;
    for (;;) {
      int enter = -1;
      for (int c = 0; c < allowed; ++c) {
        if (cost(c) > eps) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= eps) continue;
        const double ratio = rhs(r) / a;
        if (leave < 0 || ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && basis(r) < basis(leave))) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void dump(std::ostream& os) const {
    os << "tableau " << m_ << " rows x " << cols_ << " columns\n";
    os << "cost:";
    for (int c = 0; c <= cols_; ++c) os << ' ' << cost_[static_cast<std::size_t>(c)];
    os << '\n';
    for (int r = 0; r < m_; ++r) {
      os << "r" << r << " [basis " << basis(r) << "]:";
      for (int c = 0; c <= cols_; ++c) os << ' ' << at(r, c);
      os << '\n';
    }
  }

 private:
  int m_, cols_;
  std::vector<double> a_;
  std::vector<double> cost_;
  std::vector<int> basis_;
};

struct StandardForm {
  Tableau tableau;
  int structural = 0;
  int artificial_begin = 0;
};

inline StandardForm build_standard_form(const LinearProgram& lp) {
  const int n = lp.var_count();
  std::vector<LpRow> rows = lp.rows();
  for (int j = 0; j < n; ++j) {
    const double u = lp.upper()[static_cast<std::size_t>(j)];
    if (std::isfinite(u)) rows.push_back({{{j, 1.0}}, Relation::kLessEqual, u});
  }
  const int m = static_cast<int>(rows.size());
  if (m > kMaxLpRows || n > kMaxLpVars) {
    throw CapacityError("linear program with " + std::to_string(m) + " rows and " +
                        std::to_string(n) + " variables exceeds the desk-scale cap (" +
                        std::to_string(kMaxLpRows) + " x " +
                        std::to_string(kMaxLpVars) + ")");
  }
  // Normalize to rhs >= 0.
  int slacks = 0, artificials = 0;
  for (auto& r : rows) {
    if (r.rhs < 0.0) {
      r.rhs = -r.rhs;
      for (auto& t : r.terms) t.second = -t.second;
      if (r.relation == Relation::kLessEqual) {
        r.relation = Relation::kGreaterEqual;
      } else if (r.relation == Relation::kGreaterEqual) {
        r.relation = Relation::kLessEqual;
      }
    }
    if (r.relation != Relation::kEqual) ++slacks;
    if (r.relation != Relation::kLessEqual) ++artificials;
  }
  const int cols = n + slacks + artificials;
  const auto cells = static_cast<std::uint64_t>(m + 1) * static_cast<std::uint64_t>(cols + 1);
  if (cells > kMaxLpCells) {
    throw CapacityError("linear program tableau of " + std::to_string(cells) +
                        " cells exceeds the desk-scale cap");
  }
  StandardForm sf{Tableau(m, cols), n, n + slacks};
  Tableau& t = sf.tableau;
  int next_slack = n, next_art = n + slacks;
  for (int i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    for (auto [j, a] : r.terms) t.at(i, j) += a;
    t.rhs(i) = r.rhs;
    if (r.relation == Relation::kLessEqual) {
      t.at(i, next_slack) = 1.0;
      t.basis(i) = next_slack++;
    } else {
      if (r.relation == Relation::kGreaterEqual) t.at(i, next_slack++) = -1.0;
      t.at(i, next_art) = 1.0;
      t.basis(i) = next_art++;
    }
  }
  return sf;
}

}  // namespace detail

/// Dense two-phase simplex with Bland's anti-cycling rule. Deterministic:
/// the same program always yields the same basis and values.
inline LpSolution solve_lp(const LinearProgram& lp) {
  auto sf = detail::build_standard_form(lp);
  auto& t = sf.tableau;
  const int m = t.rows();
  const int cols = t.cols();
  LpSolution sol;

  // Phase 1: maximize -sum(artificials).
  if (sf.artificial_begin < cols) {
    for (int c = 0; c <= cols; ++c) t.cost(c) = 0.0;
    for (int r = 0; r < m; ++r) {
      if (t.basis(r) < sf.artificial_begin) continue;
      for (int c = 0; c <= cols; ++c) {
        if (c < sf.artificial_begin || c == cols) t.cost(c) += t.at(r, c);
      }
    }
    t.optimize(sf.artificial_begin, sol.pivots);
    double infeasibility = 0.0;
    for (int r = 0; r < m; ++r) {
      if (t.basis(r) >= sf.artificial_begin) infeasibility += t.rhs(r);
    }
    if (infeasibility > kLpTol) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (t.basis(r) < sf.artificial_begin) continue;
      for (int c = 0; c < sf.artificial_begin; ++c) {
        if (std::abs(t.at(r, c)) > 1e-9) {
          t.pivot(r, c);
          ++sol.pivots;
          break;
        }
      }
    }
    for (int r = 0; r < m; ++r) {
      for (int c = sf.artificial_begin; c < cols; ++c) {
        if (t.basis(r) != c) t.at(r, c) = 0.0;
      }
    }
  }

  // Phase 2.
  for (int c = 0; c <= cols; ++c) t.cost(c) = 0.0;
  for (int j = 0; j < sf.structural; ++j) t.cost(j) = lp.objective()[static_cast<std::size_t>(j)];
  for (int r = 0; r < m; ++r) {
    const int b = t.basis(r);
    const double cb = b < sf.structural ? lp.objective()[static_cast<std::size_t>(b)] : 0.0;
    if (cb == 0.0) continue;
    for (int c = 0; c <= cols; ++c) t.cost(c) -= cb * t.at(r, c);
  }
  if (!t.optimize(sf.artificial_begin, sol.pivots)) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }
  sol.values.assign(static_cast<std::size_t>(sf.structural), 0.0);
  for (int r = 0; r < m; ++r) {
    const int b = t.basis(r);
    if (b < sf.structural) sol.values[static_cast<std::size_t>(b)] = std::max(0.0, t.rhs(r));
  }
  sol.objective = lp.evaluate(sol.values);
  sol.status = LpStatus::kOptimal;
  const double viol = lp.max_violation(sol.values);
  if (viol > kLpTol) {
    throw NumericalError("solve_lp: optimal basis violates a constraint by " +
                         std::to_string(viol));
  }
  return sol;
}

/// Plain-text dump of the program followed by its initial tableau.
inline void dump_lp(std::ostream& os, const LinearProgram& lp) {
  os << "maximize";
  for (int j = 0; j < lp.var_count(); ++j) {
    os << ' ' << lp.objective()[static_cast<std::size_t>(j)] << "*x" << j;
  }
  os << "\n";
  for (const auto& r : lp.rows()) {
    for (auto [j, a] : r.terms) os << ' ' << a << "*x" << j;
    os << (r.relation == Relation::kLessEqual ? " <= "
           : r.relation == Relation::kEqual   ? " = "
                                              : " >= ")
       << r.rhs << '\n';
  }
  for (int j = 0; j < lp.var_count(); ++j) {
    os << "0 <= x" << j << " <= " << lp.upper()[static_cast<std::size_t>(j)] << '\n';
  }
  detail::build_standard_form(lp).tableau.dump(os);
}

}  // namespace rocrs

#endif  // ROCRS_LP_HPP
