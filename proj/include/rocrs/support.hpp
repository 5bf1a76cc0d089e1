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

#ifndef ROCRS_SUPPORT_HPP
#define ROCRS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "rocrs/element_set.hpp"
#include "rocrs/error.hpp"
#include "rocrs/matroid.hpp"

namespace rocrs {

inline constexpr double kDecompositionTol = 1e-9;

/// x = sum_j beta_j * 1[B_j] with every B_j independent and sum beta = 1.
struct SupportDecomposition {
  struct Entry {
    double beta = 0.0;
    ElementSet set;
  };
  std::vector<Entry> entries;

  double total_weight() const {
    double s = 0.0;
    for (const auto& en : entries) s += en.beta;
    return s;
  }
  /// sum of beta_j over the sets containing e.
  double coverage(int e) const {
    double s = 0.0;
    for (const auto& en : entries) {
      if (en.set.contains(e)) s += en.beta;
    }
    return s;
  }
};

/// Convex decomposition of a point of the matroid polytope into indicator
/// vectors of independent sets.
///
/// Iterative peeling. The remaining vector r always lies in w * P(M) where w
/// is the unassigned weight. Each round picks a maximal independent set B of
/// supp(r) that spans every tight set (r(A) = w * rank(A)), then takes the
/// largest step beta with r - beta * 1[B] >= 0 and r - beta * 1[B] in
/// (w - beta) * P(M), i.e. for every A within supp(r)
///   beta * (rank(A) - |A & B|) <= w * rank(A) - r(A).
/// Leftover weight is assigned to the empty set.
///
/// B is the greedy set over a maximal chain of tight sets, layer by layer,
/// decreasing r_e inside a layer and ascending id on ties. Greedy makes B a
/// basis of every chain member; the chain's equalities cut out the same face
/// as all tight equalities, so B is then a basis of every tight set.
inline SupportDecomposition decompose_support(
    const Matroid& m, std::span<const double> x,
    double tol = kDecompositionTol) {
  const int n = m.size();
  if (static_cast<int>(x.size()) != n) {
    throw InputError("decompose_support: vector length does not match ground set");
  }
  require_cap(n, enumeration_cap(kDefaultPolytopeCap), "decompose_support");

  std::vector<double> r(x.begin(), x.end());
  ElementSet supp;
  for (int e = 0; e < n; ++e) {
    auto& v = r[static_cast<std::size_t>(e)];
    if (v < -tol) {
      throw DomainError("decompose_support: negative coordinate at element " +
                        std::to_string(e));
    }
    if (v <= tol) {
      v = 0.0;
    } else {
      supp.insert(e);
    }
  }

  const SubsetRankTable table(m, supp);
  {
    const auto sums = table.subset_sums(r);
    for (std::size_t idx = 1; idx < table.count(); ++idx) {
      if (sums[idx] > table.rank(idx) + tol) {
        throw DomainError("decompose_support: point violates rank constraint of " +
                          table.mask(idx).str());
      }
    }
  }

  SupportDecomposition out;
  double w = 1.0;
  const int max_rounds = n * n + 1;
  std::vector<int> order;
  for (int round = 0; round < max_rounds; ++round) {
    const auto sums = table.subset_sums(r);
    // Maximal chain of tight sets: repeatedly the smallest tight set that
    // strictly contains the previous one.
    std::vector<int> layer(static_cast<std::size_t>(n), n + 1);
    ElementSet chain;
    for (int depth = 0;; ++depth) {
      std::size_t best = 0;
      int best_size = n + 1;
      for (std::size_t idx = 1; idx < table.count(); ++idx) {
        const ElementSet a = table.mask(idx);
        if (a.size() <= chain.size() || a.size() >= best_size) continue;
        if ((a & chain) != chain) continue;
        if (w * table.rank(idx) - sums[idx] <= tol) {
          best = idx;
          best_size = a.size();
        }
      }
      if (best == 0) break;
      for (int e : table.mask(best) - chain) {
        layer[static_cast<std::size_t>(e)] = depth;
      }
      chain = table.mask(best);
    }
    order.clear();
    for (int e : supp) {
      if (r[static_cast<std::size_t>(e)] > 0.0) order.push_back(e);
    }
    if (order.empty()) break;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const auto ua = static_cast<std::size_t>(a);
      const auto ub = static_cast<std::size_t>(b);
      if (layer[ua] != layer[ub]) return layer[ua] < layer[ub];
      return r[ua] > r[ub];
    });
    const ElementSet b = m.greedy_basis(order);

    double beta = w;
    for (int e : b) beta = std::min(beta, r[static_cast<std::size_t>(e)]);
    for (std::size_t idx = 1; idx < table.count(); ++idx) {
      const int deficit = table.rank(idx) - (table.mask(idx) & b).size();
      if (deficit <= 0) continue;
      const double slack = w * table.rank(idx) - sums[idx];
      beta = std::min(beta, std::max(slack, 0.0) / deficit);
    }
    if (beta <= 0.0) {
      double residual = 0.0;
      for (double v : r) residual = std::max(residual, v);
      throw NumericalError("decompose_support: no progress in round " +
                           std::to_string(round) + ", residual " +
                           std::to_string(residual));
    }

    out.entries.push_back({beta, b});
    w -= beta;
    for (int e : b) {
      auto& v = r[static_cast<std::size_t>(e)];
      v -= beta;
      if (v <= tol) v = 0.0;
    }
    if (w <= tol) w = 0.0;
  }

  double residual = 0.0;
  for (double v : r) residual = std::max(residual, v);
  if (residual > 0.0) {
    throw NumericalError("decompose_support: residual " +
                         std::to_string(residual) + " after " +
                         std::to_string(max_rounds) + " rounds");
  }
  const double pad = 1.0 - out.total_weight();
  if (pad > tol) out.entries.push_back({pad, ElementSet()});
  return out;
}

}  // namespace rocrs

#endif  // ROCRS_SUPPORT_HPP
