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

#ifndef ROCRS_SUBMODULAR_HPP
#define ROCRS_SUBMODULAR_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "rocrs/crs.hpp"
#include "rocrs/element_set.hpp"
#include "rocrs/error.hpp"
#include "rocrs/parallel.hpp"
#include "rocrs/polytope.hpp"
#include "rocrs/random.hpp"
#include "rocrs/stats.hpp"

namespace rocrs {

inline constexpr int kExactMultilinearCap = 20;
/// Strict-improvement threshold of the marginal-gain filter.
inline constexpr double kGainTol = 1e-12;

/// Nonnegative set function given by one of a few concrete families.
class SubmodularOracle {
 public:
  struct Modular {
    std::vector<double> weights;
  };
  // Element e covers the universe items in covers[e].
  struct Coverage {
    std::vector<double> universe_weights;
    std::vector<ElementSet> covers;
  };
  // Elements are vertices; value = weight of edges with one end inside.
  struct Cut {
    struct Edge {
      int u = 0, v = 0;
      double w = 0.0;
    };
    std::vector<Edge> edges;
  };
  struct Table {
    std::vector<double> values;  // indexed by subset mask
  };
  using Kind = std::variant<Modular, Coverage, Cut, Table>;

  static SubmodularOracle modular(std::vector<double> w) {
    for (double v : w) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InputError("modular oracle: weights must be finite and nonnegative");
      }
    }
    const int n = static_cast<int>(w.size());
    return SubmodularOracle(n, Modular{std::move(w)});
  }

  static SubmodularOracle coverage(std::vector<double> universe_weights,
                                   const std::vector<std::vector<int>>& covers) {
    const int u = static_cast<int>(universe_weights.size());
    require_ground_size(u);
    for (double v : universe_weights) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InputError("coverage oracle: universe weights must be finite and nonnegative");
      }
    }
    Coverage c{std::move(universe_weights), {}};
    for (const auto& list : covers) {
      ElementSet s;
      for (int i : list) {
        if (i < 0 || i >= u) {
          throw InputError("coverage oracle: universe item " + std::to_string(i) +
                           " out of range");
        }
        s.insert(i);
      }
      c.covers.push_back(s);
    }
    const int n = static_cast<int>(c.covers.size());
    return SubmodularOracle(n, std::move(c));
  }

  static SubmodularOracle cut(int vertices, std::vector<Cut::Edge> edges) {
    for (const auto& e : edges) {
      if (e.u < 0 || e.v < 0 || e.u >= vertices || e.v >= vertices) {
        throw InputError("cut oracle: edge endpoint out of range");
      }
      if (!(e.w >= 0.0) || !std::isfinite(e.w)) {
        throw InputError("cut oracle: edge weights must be finite and nonnegative");
      }
    }
    return SubmodularOracle(vertices, Cut{std::move(edges)});
  }

  static SubmodularOracle table(int n, std::vector<double> values) {
    require_ground_size(n);
    require_cap(n, enumeration_cap(kExactMultilinearCap), "explicit oracle");
    if (values.size() != (std::size_t{1} << n)) {
      throw InputError("explicit oracle: expected 2^n values");
    }
    for (double v : values) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InputError("explicit oracle: values must be finite and nonnegative");
      }
    }
    return SubmodularOracle(n, Table{std::move(values)});
  }

  int size() const { return n_; }
  const Kind& kind() const { return kind_; }
  std::string kind_name() const {
    static const char* names[] = {"modular", "coverage", "cut", "explicit"};
    return names[kind_.index()];
  }

  double operator()(ElementSet s) const {
    return std::visit([s](const auto& k) { return eval(k, s); }, kind_);
  }
  double value(ElementSet s) const {
    require_within(s, n_, "submodular oracle");
    return (*this)(s);
  }

 private:
  SubmodularOracle(int n, Kind k) : n_(n), kind_(std::move(k)) {
    require_ground_size(n);
  }

  static double eval(const Modular& m, ElementSet s) {
    double v = 0.0;
    for (int e : s) v += m.weights[static_cast<std::size_t>(e)];
    return v;
  }
  static double eval(const Coverage& c, ElementSet s) {
    ElementSet covered;
    for (int e : s) covered = covered | c.covers[static_cast<std::size_t>(e)];
    double v = 0.0;
    for (int i : covered) v += c.universe_weights[static_cast<std::size_t>(i)];
    return v;
  }
  static double eval(const Cut& c, ElementSet s) {
    double v = 0.0;
    for (const auto& e : c.edges) {
      if (s.contains(e.u) != s.contains(e.v)) v += e.w;
    }
    return v;
  }
  static double eval(const Table& t, ElementSet s) {
    return t.values[static_cast<std::size_t>(s.bits())];
  }

  int n_ = 0;
  Kind kind_;
};

/// Exact multilinear extension from a table of every f(A).
class MultilinearEvaluator {
 public:
  explicit MultilinearEvaluator(const SubmodularOracle& f) : n_(f.size()) {
    require_cap(n_, enumeration_cap(kExactMultilinearCap), "exact multilinear extension");
    table_.resize(std::size_t{1} << n_);
    for (std::size_t a = 0; a < table_.size(); ++a) {
      table_[a] = f(ElementSet(a));
      if (table_[a] < 0.0) {
        throw LogicError("submodular oracle returned a negative value");
      }
    }
  }

  int size() const { return n_; }
  double f(ElementSet a) const { return table_[static_cast<std::size_t>(a.bits())]; }

  /// F(y) = sum_A f(A) prod_{e in A} y_e prod_{e not in A} (1 - y_e).
  double value(std::span<const double> y) const {
    check(y);
    double total = 0.0;
    walk(y, 0, 0, 1.0, [&](std::uint64_t a, double p) { total += p * table_[a]; });
    return total;
  }

  /// dF/dy_e = E[f(R + e) - f(R - e)] for R ~ y.
  std::vector<double> gradient(std::span<const double> y) const {
    check(y);
    std::vector<double> g(static_cast<std::size_t>(n_), 0.0);
    walk(y, 0, 0, 1.0, [&](std::uint64_t a, double p) {
      for (int e = 0; e < n_; ++e) {
        const std::uint64_t bit = std::uint64_t{1} << e;
        g[static_cast<std::size_t>(e)] += p * (table_[a | bit] - table_[a & ~bit]);
      }
    });
    return g;
  }

 private:
  void check(std::span<const double> y) const {
    if (static_cast<int>(y.size()) != n_) {
      throw InputError("multilinear extension: vector length mismatch");
    }
  }

  // Depth-first over elements; branches of probability zero are skipped.
  template <typename Leaf>
  void walk(std::span<const double> y, int i, std::uint64_t a, double p,
            Leaf&& leaf) const {
    if (i == n_) {
      leaf(a, p);
      return;
    }
    const double yi = y[static_cast<std::size_t>(i)];
    if (yi < 1.0) walk(y, i + 1, a, p * (1.0 - yi), leaf);
    if (yi > 0.0) walk(y, i + 1, a | (std::uint64_t{1} << i), p * yi, leaf);
  }

  int n_;
  std::vector<double> table_;
};

inline double multilinear_exact(const SubmodularOracle& f, std::span<const double> y) {
  return MultilinearEvaluator(f).value(y);
}

/// Sample mean of f(R) over independent roundings R ~ y.
inline MeanEstimate multilinear_mc(const SubmodularOracle& f,
                                   std::span<const double> y,
                                   std::uint64_t samples, Rng& rng) {
  if (samples < 1) throw InputError("multilinear_mc: samples must be >= 1");
  if (static_cast<int>(y.size()) != f.size()) {
    throw InputError("multilinear_mc: vector length mismatch");
  }
  std::vector<double> v(samples);
  for (auto& s : v) s = f(sample_active_set(y, rng));
  return estimate_mean(v);
}

struct GreedyOptions {
  double T = 1.0;
  int steps = 100;
  // Samples per marginal weight when F cannot be evaluated exactly.
  std::uint64_t mc_samples = 2000;
};

struct GreedyTrajectory {
  double delta = 0.0;
  bool exact = true;
  std::vector<double> times;                   // 0, delta, ..., T
  std::vector<std::vector<double>> points;     // y at each time
  std::vector<std::vector<double>> directions; // I at each step
  std::vector<double> values;                  // F(y) at each time
  const std::vector<double>& result() const { return points.back(); }
};

/// Measured continuous greedy: y <- y + delta * I * (1 - y) with
/// I = argmax_{v in P} sum_e v_e (F(y v 1_e) - F(y)).
inline GreedyTrajectory measured_continuous_greedy(const SubmodularOracle& f,
                                                   const PolytopeSystem& p,
                                                   const GreedyOptions& opt,
                                                   Rng& rng) {
  const int n = f.size();
  if (p.size() != n) throw InputError("measured greedy: ground set mismatch");
  if (!(opt.T > 0.0 && opt.T <= 1.0)) {
    throw InputError("measured greedy: T must lie in (0, 1]");
  }
  if (opt.steps < 1) throw InputError("measured greedy: steps must be >= 1");
  GreedyTrajectory tr;
  tr.delta = opt.T / opt.steps;
  tr.exact = n <= enumeration_cap(kExactMultilinearCap);
  std::optional<MultilinearEvaluator> ev;
  if (tr.exact) ev.emplace(f);

  std::vector<double> y(static_cast<std::size_t>(n), 0.0);
  auto value_of = [&](const std::vector<double>& v) {
    return tr.exact ? ev->value(v) : multilinear_mc(f, v, opt.mc_samples, rng).mean;
  };
  tr.times.push_back(0.0);
  tr.points.push_back(y);
  tr.values.push_back(value_of(y));
  for (int s = 0; s < opt.steps; ++s) {
    std::vector<double> w(static_cast<std::size_t>(n));
    if (tr.exact) {
      const auto g = ev->gradient(y);
      for (std::size_t e = 0; e < w.size(); ++e) w[e] = (1.0 - y[e]) * g[e];
    } else {
      // Common random roundings for every element's marginal.
      std::vector<double> acc(w.size(), 0.0);
      for (std::uint64_t k = 0; k < opt.mc_samples; ++k) {
        const ElementSet r = sample_active_set(y, rng);
        const double base = f(r);
        for (int e = 0; e < n; ++e) {
          if (!r.contains(e)) acc[static_cast<std::size_t>(e)] += f(r.with(e)) - base;
        }
      }
      for (auto& v : acc) v /= static_cast<double>(opt.mc_samples);
      w = acc;
    }
    const auto dir = linear_maximize(p, w);
    for (std::size_t e = 0; e < y.size(); ++e) {
      y[e] += tr.delta * dir[e] * (1.0 - y[e]);
    }
    tr.directions.push_back(dir);
    tr.times.push_back(tr.delta * (s + 1));
    tr.points.push_back(y);
    tr.values.push_back(value_of(y));
  }
  return tr;
}

/// One CR run where an element accepted by the scheme joins X only when it
/// strictly increases f; the scheme's controllers are updated regardless.
inline CrsRunResult run_crs_submodular(const CrsScheme& scheme,
                                       const SubmodularOracle& f, Rng& rng,
                                       const RunOptions& opt = {}) {
  if (f.size() != scheme.size()) {
    throw InputError("run_crs_submodular: oracle and instance sizes differ");
  }
  double current = f(ElementSet());
  return run_crs_filtered(scheme, rng, opt, [&](int e, ElementSet x) {
    const double next = f(x.with(e));
    if (next < 0.0 || current < 0.0) {
      throw LogicError("submodular oracle returned a negative value");
    }
    if (next - current > kGainTol) {
      current = next;
      return true;
    }
    return false;
  });
}

struct SubmodularCrsReport {
  MeanEstimate value;  // E[f(X)]
  double benchmark = 0.0;  // F(x)
  double bound = 0.0;      // F(x) / (lambda + 1)
  std::uint64_t infeasible = 0;
  bool pass = false;
};

/// E[f(X)] against F(x) / (lambda + 1), F exact.
inline SubmodularCrsReport estimate_submodular_crs(const CrsScheme& scheme,
                                                   const SubmodularOracle& f,
                                                   std::uint64_t trials,
                                                   std::uint64_t master_seed,
                                                   int jobs = 1) {
  if (!scheme.conditional_guarantee()) {
    throw InputError("submodular filter bound needs constraints without the "
                     "big/small reduction");
  }
  std::vector<double> values(trials);
  std::vector<std::uint64_t> bad(static_cast<std::size_t>(std::max(jobs, 1)), 0);
  parallel_chunks(trials, jobs, [&](std::uint64_t b, std::uint64_t e, std::size_t c) {
    for (std::uint64_t i = b; i < e; ++i) {
      Rng rng(derive_seed(master_seed, i));
      const auto r = run_crs_submodular(scheme, f, rng);
      if (!r.feasible) ++bad[c];
      values[i] = f(r.filtered);
    }
  });
  SubmodularCrsReport rep;
  rep.value = estimate_mean(values);
  for (auto v : bad) rep.infeasible += v;
  rep.benchmark = multilinear_exact(f, scheme.instance().x);
  rep.bound = rep.benchmark / (scheme.lambda() + 1);
  rep.pass = rep.infeasible == 0 &&
             passes_lower_bound(rep.value.mean, rep.value.std_err, rep.bound);
  return rep;
}

/// max f(S) over S independent in every constraint, by enumeration.
inline std::pair<double, ElementSet> brute_force_optimum(
    const SubmodularOracle& f, std::span<const Constraint> constraints) {
  const int n = f.size();
  require_cap(n, enumeration_cap(kExactMultilinearCap), "brute_force_optimum");
  double best = f(ElementSet());
  ElementSet arg;
  for (std::uint64_t a = 1; a < (std::uint64_t{1} << n); ++a) {
    const ElementSet s(a);
    if (!is_feasible(constraints, s)) continue;
    const double v = f(s);
    if (v > best) {
      best = v;
      arg = s;
    }
  }
  return {best, arg};
}

}  // namespace rocrs

#endif  // ROCRS_SUBMODULAR_HPP
