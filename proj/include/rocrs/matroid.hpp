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

#ifndef ROCRS_MATROID_HPP
#define ROCRS_MATROID_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rocrs/element_set.hpp"
#include "rocrs/error.hpp"
#include "rocrs/stats.hpp"

namespace rocrs {

/// A matroid over the ground set {0, ..., n-1} given by one of four
/// structural encodings. Immutable after construction.
class Matroid {
 public:
  struct Uniform {
    int rank = 0;
  };
  struct Partition {
    std::vector<ElementSet> blocks;
    std::vector<int> caps;
  };
  // Element i is edges[i]; independent sets are forests.
  struct Graphic {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;
  };
  // Sorted list of every independent set.
  struct Explicit {
    std::vector<std::uint64_t> independent;
  };
  using Kind = std::variant<Uniform, Partition, Graphic, Explicit>;

  static Matroid uniform(int n, int rank) {
    require_ground_size(n);
    if (rank < 0) throw InputError("uniform matroid: negative rank");
    return Matroid(n, Uniform{rank});
  }

  /// Elements outside every block are unconstrained.
  static Matroid partition(int n, const std::vector<std::vector<int>>& blocks,
                           std::vector<int> caps) {
    require_ground_size(n);
    if (blocks.size() != caps.size()) {
      throw InputError("partition matroid: blocks and caps differ in length");
    }
    Partition p;
    ElementSet seen;
    for (const auto& block : blocks) {
      ElementSet b;
      for (int e : block) {
        if (e < 0 || e >= n) {
          throw InputError("partition matroid: element " + std::to_string(e) +
                           " out of range");
        }
        if (seen.contains(e) || b.contains(e)) {
          throw InputError("partition matroid: element " + std::to_string(e) +
                           " appears in two blocks");
        }
        b.insert(e);
      }
      seen |= b;
      p.blocks.push_back(b);
    }
    for (int c : caps) {
      if (c < 0) throw InputError("partition matroid: negative capacity");
    }
    p.caps = std::move(caps);
    return Matroid(n, std::move(p));
  }

  static Matroid graphic(int vertices,
                         std::vector<std::pair<int, int>> edges) {
    if (vertices < 0) throw InputError("graphic matroid: negative vertex count");
    const int n = static_cast<int>(edges.size());
    require_ground_size(n);
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= vertices || v >= vertices) {
        throw InputError("graphic matroid: edge endpoint out of range");
      }
    }
    return Matroid(n, Graphic{vertices, std::move(edges)});
  }

  /// Validates that the family contains the empty set, is closed under
  /// taking subsets and satisfies the augmentation axiom.
  static Matroid explicit_family(int n,
                                 const std::vector<std::vector<int>>& sets) {
    require_ground_size(n);
    Explicit ex;
    for (const auto& s : sets) {
      ElementSet m;
      for (int e : s) {
        if (e < 0 || e >= n) {
          throw InputError("explicit matroid: element " + std::to_string(e) +
                           " out of range");
        }
        m.insert(e);
      }
      ex.independent.push_back(m.bits());
    }
    std::sort(ex.independent.begin(), ex.independent.end());
    ex.independent.erase(
        std::unique(ex.independent.begin(), ex.independent.end()),
        ex.independent.end());
    auto has = [&](std::uint64_t b) {
      return std::binary_search(ex.independent.begin(), ex.independent.end(), b);
    };
    if (!has(0)) throw InputError("explicit matroid: empty set missing");
    for (std::uint64_t b : ex.independent) {
      for (int e : ElementSet(b)) {
        if (!has(ElementSet(b).without(e).bits())) {
          throw InputError("explicit matroid: family not closed under subsets");
        }
      }
    }
    for (std::uint64_t i : ex.independent) {
      for (std::uint64_t j : ex.independent) {
        const ElementSet a(i), b(j);
        if (a.size() >= b.size()) continue;
        bool augmented = false;
        for (int e : b - a) {
          if (has(a.with(e).bits())) {
            augmented = true;
            break;
          }
        }
        if (!augmented) {
          throw InputError("explicit matroid: augmentation fails for " +
                           a.str() + " and " + b.str());
        }
      }
    }
    return Matroid(n, std::move(ex));
  }

  int size() const { return n_; }
  ElementSet ground() const { return ElementSet::full(n_); }
  const Kind& kind() const { return kind_; }

  std::string kind_name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Uniform>) return "uniform";
          if constexpr (std::is_same_v<T, Partition>) return "partition";
          if constexpr (std::is_same_v<T, Graphic>) return "graphic";
          return "explicit";
        },
        kind_);
  }

  bool is_independent(ElementSet s) const {
    require_within(s, n_, "is_independent");
    return independent(s);
  }

  /// Size of a maximum independent subset, found by the matroid greedy
  /// algorithm in increasing element order.
  int rank(ElementSet s) const {
    require_within(s, n_, "rank");
    return max_independent_subset(s).size();
  }

  /// Greedy maximal independent subset of s scanning elements in the
  /// given order.
  ElementSet greedy_basis(std::span<const int> order) const {
    ElementSet b;
    for (int e : order) {
      if (!b.contains(e) && independent(b.with(e))) b.insert(e);
    }
    return b;
  }

  ElementSet max_independent_subset(ElementSet s) const {
    ElementSet b;
    for (int e : s) {
      if (independent(b.with(e))) b.insert(e);
    }
    return b;
  }

  /// Unchecked oracle; s must lie within the ground set.
  bool independent(ElementSet s) const {
    return std::visit([&](const auto& k) { return independent_impl(k, s); },
                      kind_);
  }

 private:
  Matroid(int n, Kind kind) : n_(n), kind_(std::move(kind)) {}

  static bool independent_impl(const Uniform& u, ElementSet s) {
    return s.size() <= u.rank;
  }
  static bool independent_impl(const Partition& p, ElementSet s) {
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
      if ((s & p.blocks[i]).size() > p.caps[i]) return false;
    }
    return true;
  }
  static bool independent_impl(const Graphic& g, ElementSet s) {
    if (s.size() >= g.vertices && !s.empty()) return false;
    if (g.vertices <= kSmallGraph) {
      std::array<int, kSmallGraph> parent;
      return is_forest(g, s, std::span<int>(parent.data(), parent.size()));
    }
    std::vector<int> parent(static_cast<std::size_t>(g.vertices));
    return is_forest(g, s, parent);
  }
  static bool is_forest(const Graphic& g, ElementSet s, std::span<int> parent) {
    for (int e : s) {
      const auto [u, v] = g.edges[static_cast<std::size_t>(e)];
      parent[static_cast<std::size_t>(u)] = u;
      parent[static_cast<std::size_t>(v)] = v;
    }
    auto find = [&](int v) {
      while (parent[static_cast<std::size_t>(v)] != v) {
        auto& p = parent[static_cast<std::size_t>(v)];
        p = parent[static_cast<std::size_t>(p)];
        v = p;
      }
      return v;
    };
    for (int e : s) {
      const auto [u, v] = g.edges[static_cast<std::size_t>(e)];
      const int ru = find(u), rv = find(v);
      if (ru == rv) return false;
      parent[static_cast<std::size_t>(ru)] = rv;
    }
    return true;
  }
  static constexpr int kSmallGraph = 128;
  static bool independent_impl(const Explicit& ex, ElementSet s) {
    return std::binary_search(ex.independent.begin(), ex.independent.end(),
                              s.bits());
  }

  int n_ = 0;
  Kind kind_;
};

/// All subsets of a fixed element list, indexed by a compact bit index, with
/// their masks and ranks. Used by every exhaustive polytope routine.
class SubsetRankTable {
 public:
  SubsetRankTable(const Matroid& m, ElementSet universe)
      : elements_(universe.to_vector()) {
    const std::size_t count = std::size_t{1} << elements_.size();
    masks_.resize(count);
    basis_.resize(count);
    rank_.resize(count);
    for (std::size_t idx = 1; idx < count; ++idx) {
      // The highest element of the subset is added last so the stored basis
      // is exactly the increasing-order greedy basis.
      const int top = 63 - std::countl_zero(static_cast<std::uint64_t>(idx));
      const std::size_t rest = idx & ~(std::size_t{1} << top);
      const int e = elements_[static_cast<std::size_t>(top)];
      masks_[idx] = masks_[rest].with(e);
      const ElementSet grown = basis_[rest].with(e);
      if (m.independent(grown)) {
        basis_[idx] = grown;
        rank_[idx] = static_cast<std::uint8_t>(rank_[rest] + 1);
      } else {
        basis_[idx] = basis_[rest];
        rank_[idx] = rank_[rest];
      }
    }
  }

  std::size_t count() const { return masks_.size(); }
  const std::vector<int>& elements() const { return elements_; }
  ElementSet mask(std::size_t idx) const { return masks_[idx]; }
  int rank(std::size_t idx) const { return rank_[idx]; }

  /// Sum of values[e] over every subset, by the same incremental scheme.
  std::vector<double> subset_sums(std::span<const double> values) const {
    std::vector<double> sums(count(), 0.0);
    for (std::size_t idx = 1; idx < count(); ++idx) {
      const int low = std::countr_zero(static_cast<std::uint64_t>(idx));
      sums[idx] = sums[idx & (idx - 1)] +
                  values[static_cast<std::size_t>(
                      elements_[static_cast<std::size_t>(low)])];
    }
    return sums;
  }

 private:
  std::vector<int> elements_;
  std::vector<ElementSet> masks_;
  std::vector<ElementSet> basis_;
  std::vector<std::uint8_t> rank_;
};

inline constexpr int kDefaultPolytopeCap = 20;

/// Membership in the matroid polytope
///   { x >= 0 : x(A) <= rank(A) for every A }
/// by exhaustive enumeration. Only subsets of supp(x) need checking since
/// x(A) = x(A & supp) and rank is monotone.
inline bool in_polytope(const Matroid& m, std::span<const double> x,
                        double tol) {
  const int n = m.size();
  if (static_cast<int>(x.size()) != n) {
    throw InputError("in_polytope: vector length does not match ground set");
  }
  require_cap(n, enumeration_cap(kDefaultPolytopeCap), "in_polytope");
  ElementSet supp;
  for (int e = 0; e < n; ++e) {
    if (x[static_cast<std::size_t>(e)] < -tol) return false;
    if (x[static_cast<std::size_t>(e)] > 0.0) supp.insert(e);
  }
  const SubsetRankTable table(m, supp);
  const auto sums = table.subset_sums(x);
  for (std::size_t idx = 1; idx < table.count(); ++idx) {
    if (sums[idx] > table.rank(idx) + tol) return false;
  }
  return true;
}

/// A polytope row x(A) <= rank.
struct RankRow {
  ElementSet set;
  int rank = 0;
};

/// Facet-candidate rows of the matroid polytope: every flat whose rank is
/// below its size, plus every non-loop singleton. A non-flat set is
/// dominated by its closure and an independent set by its singletons, so
/// together with x >= 0 these rows describe the same polytope.
inline std::vector<RankRow> polytope_rows(const Matroid& m) {
  const int n = m.size();
  require_cap(n, enumeration_cap(kDefaultPolytopeCap), "polytope_rows");
  const SubsetRankTable table(m, m.ground());
  std::vector<RankRow> rows;
  // With the full ground set as universe, the compact index is the mask.
  for (std::size_t idx = 1; idx < table.count(); ++idx) {
    const ElementSet a = table.mask(idx);
    const int r = table.rank(idx);
    if (a.size() == 1) {
      if (r == 1) rows.push_back({a, 1});
      continue;
    }
    if (r >= a.size()) continue;
    bool flat = true;
    for (int e = 0; e < n && flat; ++e) {
      if (a.contains(e)) continue;
      if (table.rank(idx | (std::size_t{1} << e)) == r) flat = false;
    }
    if (flat) rows.push_back({a, r});
  }
  // Loops: rank-0 flats are covered above once they have two elements; a
  // single loop needs its own x_e <= 0 row.
  for (int e = 0; e < n; ++e) {
    if (!m.independent(ElementSet().with(e))) {
      bool covered = false;
      for (const auto& row : rows) {
        if (row.rank == 0 && row.set.contains(e)) covered = true;
      }
      if (!covered) rows.push_back({ElementSet().with(e), 0});
    }
  }
  return rows;
}

}  // namespace rocrs

#endif  // ROCRS_MATROID_HPP
