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


#ifndef ROCRS_GENERATORS_HPP
#define ROCRS_GENERATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rocrs/constraint.hpp"
#include "rocrs/crs.hpp"
#include "rocrs/error.hpp"
#include "rocrs/instances.hpp"
#include "rocrs/knapsack.hpp"
#include "rocrs/matroid.hpp"
#include "rocrs/random.hpp"
#include "rocrs/submodular.hpp"

namespace rocrs {

/// `edges` random non-loop edges over `vertices` vertices.
inline Matroid generate_graphic(Rng& rng, int vertices, int edges) {
  if (vertices < 2) throw InputError("graphic generator: need at least two vertices");
  std::vector<std::pair<int, int>> list;
  for (int i = 0; i < edges; ++i) {
    const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(vertices)));
    int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(vertices - 1)));
    if (v >= u) ++v;
    list.emplace_back(u, v);
  }
  return Matroid::graphic(vertices, std::move(list));
}

/// Contiguous blocks of near-equal size, one per capacity.
inline Matroid generate_partition(int n, const std::vector<int>& caps) {
  const int b = static_cast<int>(caps.size());
  if (b < 1 || b > n) throw InputError("partition generator: need between 1 and n blocks");
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(b));
  for (int e = 0; e < n; ++e) {
    blocks[static_cast<std::size_t>(e * b / n)].push_back(e);
  }
  return Matroid::partition(n, blocks, caps);
}

/// Random block structure with capacities between 1 and the block size.
inline Matroid generate_random_partition(Rng& rng, int n, int blocks) {
  if (blocks < 1) throw InputError("partition generator: need at least one block");
  std::vector<std::vector<int>> parts(static_cast<std::size_t>(blocks));
  for (int e = 0; e < n; ++e) parts[rng.below(static_cast<std::uint64_t>(blocks))].push_back(e);
  std::vector<std::vector<int>> nonempty;
  std::vector<int> caps;
  for (auto& p : parts) {
    if (p.empty()) continue;
    caps.push_back(1 + static_cast<int>(rng.below(p.size())));
    nonempty.push_back(std::move(p));
  }
  return Matroid::partition(n, nonempty, caps);
}

/// Uniform, partition or graphic with equal probability.
inline Matroid generate_matroid(Rng& rng, int n) {
  switch (rng.below(3)) {
    case 0:
      return Matroid::uniform(n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(n / 2, 1)))));
    case 1:
      return generate_random_partition(rng, n, 1 + static_cast<int>(rng.below(3)));
    default:
      return generate_graphic(rng, std::max(3, n / 2 + 1), n);
  }
}

/// Sizes uniform in [lo, hi].
inline KnapsackConstraint generate_knapsack(Rng& rng, int n, double lo, double hi) {
  if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) throw InputError("knapsack generator: need 0 <= lo <= hi <= 1");
  std::vector<double> s(static_cast<std::size_t>(n));
  for (auto& v : s) v = lo + (hi - lo) * rng.uniform();
  return KnapsackConstraint(std::move(s));
}

inline SubmodularOracle generate_coverage(Rng& rng, int n, int universe, double density = 0.3) {
  std::vector<double> w(static_cast<std::size_t>(universe));
  for (auto& v : w) v = 0.1 + rng.uniform();
  std::vector<std::vector<int>> covers(static_cast<std::size_t>(n));
  for (auto& c : covers) {
    for (int i = 0; i < universe; ++i) {
      if (rng.bernoulli(density)) c.push_back(i);
    }
  }
  return SubmodularOracle::coverage(std::move(w), covers);
}

inline SubmodularOracle generate_cut(Rng& rng, int n, double density = 0.5) {
  std::vector<SubmodularOracle::Cut::Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.bernoulli(density)) edges.push_back({u, v, 0.1 + rng.uniform()});
    }
  }
  return SubmodularOracle::cut(n, std::move(edges));
}

/// A set feasible in every constraint, grown greedily in random order.
inline ElementSet random_common_independent(std::span<const Constraint> cs, int n, Rng& rng) {
  ElementSet s;
  for (int e : rng.permutation(n)) {
    if (is_feasible(cs, s.with(e))) s.insert(e);
  }
  return s;
}

/// scale * sum_j w_j 1_{I_j} over `pieces` random common independent sets
/// with random convex weights; lies in every constraint polytope.
inline std::vector<double> generate_point(std::span<const Constraint> cs, int n, Rng& rng,
                                          double scale = 1.0, int pieces = 4) {
  if (!(scale >= 0.0 && scale <= 1.0)) throw InputError("point generator: scale must lie in [0, 1]");
  if (pieces < 1) throw InputError("point generator: need at least one piece");
  std::vector<double> w(static_cast<std::size_t>(pieces));
  double total = 0.0;
  for (auto& v : w) total += (v = rng.uniform() + 0.05);
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (double v : w) {
    for (int e : random_common_independent(cs, n, rng)) {
      x[static_cast<std::size_t>(e)] += scale * v / total;
    }
  }
  for (auto& v : x) v = std::min(v, 1.0);
  return x;
}

/// `clients` clients with `per_client` items each, integer values in
/// 0..max_value with random sparse distributions, and `k` random matroids
/// over the items.
inline AuctionInstance generate_auction(Rng& rng, int clients, int per_client, int max_value,
                                        int k) {
  if (clients < 0 || per_client < 1 || max_value < 1 || k < 0) {
    throw InputError("auction generator: invalid parameters");
  }
  AuctionInstance inst;
  inst.items = clients * per_client;
  require_ground_size(inst.items);
  for (int i = 0; i < clients; ++i) {
    std::vector<int> g;
    for (int j = 0; j < per_client; ++j) g.push_back(i * per_client + j);
    inst.clients.push_back(std::move(g));
  }
  for (int c = 0; c < inst.items; ++c) {
    std::vector<double> d(static_cast<std::size_t>(max_value + 1), 0.0);
    double total = 0.0;
    for (auto& v : d) {
      if (rng.bernoulli(0.6)) total += (v = rng.uniform());
    }
    if (total == 0.0) {
      d.back() = 1.0;
      total = 1.0;
    }
    for (auto& v : d) v /= total;
    // Renormalize so the entries sum to one in binary64 as well.
    double s = 0.0;
    for (std::size_t v = 0; v + 1 < d.size(); ++v) s += d[v];
    d.back() = std::max(0.0, 1.0 - s);
    inst.pmf.push_back(std::move(d));
  }
  for (int j = 0; j < k; ++j) inst.constraints.push_back(generate_matroid(rng, inst.items));
  return inst;
}

/// n elements, d rows with uniform capacities in 1..2, each element touching
/// between 1 and k rows with two or three random outcomes.
inline PackingInstance generate_packing(Rng& rng, int n, int d, int k) {
  if (n < 0 || d < 1 || k < 1 || k > d) throw InputError("packing generator: invalid parameters");
  PackingInstance inst;
  inst.n = n;
  for (int i = 0; i < d; ++i) {
    inst.row_matroids.push_back(Matroid::uniform(n, 1 + static_cast<int>(rng.below(2))));
  }
  for (int e = 0; e < n; ++e) {
    const int size = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    ElementSet q;
    for (int r : rng.permutation(d)) {
      if (q.size() < size) q.insert(r);
    }
    inst.rows.push_back(q);
    const int count = 2 + static_cast<int>(rng.below(2));
    std::vector<PackingInstance::Outcome> outs;
    double total = 0.0;
    for (int j = 0; j < count; ++j) {
      PackingInstance::Outcome o;
      o.prob = 0.1 + rng.uniform();
      total += o.prob;
      o.value = 1.0 + static_cast<double>(rng.below(5));
      for (int r : q) {
        if (rng.bernoulli(0.7)) o.rows.insert(r);
      }
      outs.push_back(o);
    }
    double s = 0.0;
    for (std::size_t j = 0; j < outs.size(); ++j) {
      outs[j].prob = j + 1 == outs.size() ? 1.0 - s : outs[j].prob / total;
      s += outs[j].prob;
    }
    inst.outcomes.push_back(std::move(outs));
  }
  return inst;
}

/// p_e uniform in [0.2, 1], k_in inner and k_out outer random matroids, a
/// coverage objective (or a cut objective when `cut` is set).
inline ProbingInstance generate_probing(Rng& rng, int n, int k_in, int k_out, bool cut = false) {
  if (n < 1 || k_in < 0 || k_out < 0) throw InputError("probing generator: invalid parameters");
  ProbingInstance inst;
  inst.n = n;
  for (int e = 0; e < n; ++e) inst.p.push_back(0.2 + 0.8 * rng.uniform());
  for (int j = 0; j < k_in; ++j) inst.inner.push_back(generate_matroid(rng, n));
  for (int j = 0; j < k_out; ++j) inst.outer.push_back(generate_matroid(rng, n));
  inst.f = cut ? generate_cut(rng, n) : generate_coverage(rng, n, std::max(4, n));
  return inst;
}

/// A point of the probing polytope: x in P(outer), p x in P(inner). Built
/// from common independent sets of inner and outer, which keeps both.
inline std::vector<double> generate_probing_point(const ProbingInstance& inst, Rng& rng,
                                                  double scale = 1.0) {
  std::vector<Constraint> all = inst.outer;
  all.insert(all.end(), inst.inner.begin(), inst.inner.end());
  return generate_point(all, inst.n, rng, scale);
}

/// A point with p^i x in P(M_i) for every row: common independent sets of
/// the row matroids are feasible because p^i <= 1.
inline std::vector<double> generate_packing_point(const PackingInstance& inst, Rng& rng,
                                                  double scale = 1.0) {
  std::vector<Constraint> rows(inst.row_matroids.begin(), inst.row_matroids.end());
  return generate_point(rows, inst.n, rng, scale);
}

}  // namespace rocrs

#endif  // ROCRS_GENERATORS_HPP
