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


#ifndef ROCRS_INSTANCES_HPP
#define ROCRS_INSTANCES_HPP

#include <cmath>
#include <string>
#include <vector>

#include "rocrs/constraint.hpp"
#include "rocrs/element_set.hpp"
#include "rocrs/error.hpp"
#include "rocrs/submodular.hpp"

namespace rocrs {

namespace detail {

inline void check_constraints(const std::vector<Constraint>& cs, int n,
                              const std::string& what) {
  for (const auto& c : cs) {
    if (constraint_size(c) != n) {
      throw InputError(what + ": constraint over " + std::to_string(constraint_size(c)) +
                       " elements, expected " + std::to_string(n));
    }
  }
}

inline void check_distribution(std::span<const double> probs, const std::string& what) {
  double total = 0.0;
  for (double q : probs) {
    if (!(q >= 0.0) || !std::isfinite(q)) {
      throw InputError(what + ": probabilities must be finite and nonnegative");
    }
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InputError(what + ": probabilities sum to " + std::to_string(total));
  }
}

}  // namespace detail

/// Unit-demand auction. Items are indexed 0..items-1; each client owns a
/// group of items and every item belongs to exactly one client. pmf[c][v]
/// is Pr[v_c = v] for integer values v = 0..B_c.
struct AuctionInstance {
  int items = 0;
  std::vector<std::vector<int>> clients;
  std::vector<std::vector<double>> pmf;
  std::vector<Constraint> constraints;

  void validate() const {
    require_ground_size(items);
    if (static_cast<int>(pmf.size()) != items) {
      throw InputError("auction: expected one value distribution per item");
    }
    for (int c = 0; c < items; ++c) {
      const auto& d = pmf[static_cast<std::size_t>(c)];
      if (d.empty()) throw InputError("auction: empty value distribution for item " + std::to_string(c));
      detail::check_distribution(d, "auction: item " + std::to_string(c));
    }
    ElementSet seen;
    for (const auto& g : clients) {
      for (int c : g) {
        if (c < 0 || c >= items) {
          throw InputError("auction: client item " + std::to_string(c) + " out of range");
        }
        if (seen.contains(c)) {
          throw InputError("auction: item " + std::to_string(c) + " belongs to two clients");
        }
        seen.insert(c);
      }
    }
    if (seen != ElementSet::full(items)) {
      throw InputError("auction: every item must belong to a client");
    }
    detail::check_constraints(constraints, items, "auction");
  }

  int max_value(int c) const {
    return static_cast<int>(pmf[static_cast<std::size_t>(c)].size()) - 1;
  }
  /// Pr[v_c >= p].
  double tail(int c, int p) const {
    const auto& d = pmf[static_cast<std::size_t>(c)];
    double s = 0.0;
    for (int v = std::max(p, 0); v < static_cast<int>(d.size()); ++v) {
      s += d[static_cast<std::size_t>(v)];
    }
    return s;
  }
};

/// Stochastic probing: element e is active with probability p_e. The probed
/// set must stay feasible in `outer`, the taken (active probed) set in
/// `inner`.
struct ProbingInstance {
  int n = 0;
  std::vector<double> p;
  std::vector<Constraint> inner;
  std::vector<Constraint> outer;
  SubmodularOracle f = SubmodularOracle::modular({});

  void validate() const {
    require_ground_size(n);
    if (static_cast<int>(p.size()) != n) throw InputError("probing: p has wrong length");
    for (double v : p) {
      if (!(v >= 0.0 && v <= 1.0)) throw InputError("probing: p_e must lie in [0, 1]");
    }
    if (f.size() != n) throw InputError("probing: objective over the wrong ground set");
    detail::check_constraints(inner, n, "probing inner");
    detail::check_constraints(outer, n, "probing outer");
  }
  int lambda() const {
    int s = 0;
    for (const auto& c : inner) s += controller_lambda(c);
    for (const auto& c : outer) s += controller_lambda(c);
    return s;
  }
};

/// Stochastic k-set packing over row matroids. Probing element e draws one
/// outcome (value, rows in which its copy materializes); rows(e) lists the
/// rows an outcome of e may touch.
struct PackingInstance {
  struct Outcome {
    double prob = 0.0;
    double value = 0.0;
    ElementSet rows;
  };
  int n = 0;
  std::vector<std::vector<Outcome>> outcomes;
  std::vector<ElementSet> rows;
  std::vector<Matroid> row_matroids;

  void validate() const {
    require_ground_size(n);
    require_ground_size(static_cast<int>(row_matroids.size()));
    if (static_cast<int>(outcomes.size()) != n || static_cast<int>(rows.size()) != n) {
      throw InputError("packing: expected outcomes and row sets for every element");
    }
    const auto d = static_cast<int>(row_matroids.size());
    for (const auto& m : row_matroids) {
      if (m.size() != n) throw InputError("packing: row matroid over the wrong ground set");
    }
    for (int e = 0; e < n; ++e) {
      const auto& q = rows[static_cast<std::size_t>(e)];
      if (!ElementSet::full(d).contains(q)) {
        throw InputError("packing: element " + std::to_string(e) + " names a missing row");
      }
      const auto& outs = outcomes[static_cast<std::size_t>(e)];
      std::vector<double> probs;
      for (const auto& o : outs) {
        if (!q.contains(o.rows)) {
          throw InputError("packing: outcome of element " + std::to_string(e) +
                           " materializes outside its rows");
        }
        if (!(o.value >= 0.0) || !std::isfinite(o.value)) {
          throw InputError("packing: outcome values must be finite and nonnegative");
        }
        probs.push_back(o.prob);
      }
      detail::check_distribution(probs, "packing: element " + std::to_string(e));
    }
  }

  int row_count() const { return static_cast<int>(row_matroids.size()); }
  /// k: the largest number of rows an element may touch.
  int k() const {
    int k = 0;
    for (const auto& q : rows) k = std::max(k, q.size());
    return k;
  }
  /// Pr[copy of e materializes in row i].
  double marginal(int e, int i) const {
    double s = 0.0;
    for (const auto& o : outcomes[static_cast<std::size_t>(e)]) {
      if (o.rows.contains(i)) s += o.prob;
    }
    return s;
  }
  double expected_value(int e) const {
    double s = 0.0;
    for (const auto& o : outcomes[static_cast<std::size_t>(e)]) s += o.prob * o.value;
    return s;
  }
};

}  // namespace rocrs

#endif  // ROCRS_INSTANCES_HPP
