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

#ifndef ROCRS_KNAPSACK_HPP
#define ROCRS_KNAPSACK_HPP

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rocrs/element_set.hpp"
#include "rocrs/error.hpp"
#include "rocrs/random.hpp"

namespace rocrs {

/// sum_{e in X} s_e <= 1 with s_e in [0, 1].
class KnapsackConstraint {
 public:
  KnapsackConstraint() = default;
  explicit KnapsackConstraint(std::vector<double> sizes)
      : sizes_(std::move(sizes)) {
    require_ground_size(size());
    for (double s : sizes_) {
      if (!(s >= 0.0 && s <= 1.0)) {
        throw InputError("knapsack: size " + std::to_string(s) +
                         " outside [0, 1]");
      }
    }
  }

  int size() const { return static_cast<int>(sizes_.size()); }
  double item_size(int e) const { return sizes_[static_cast<std::size_t>(e)]; }
  const std::vector<double>& sizes() const { return sizes_; }

  /// Every size at most 1/2.
  bool bounded() const {
    return std::all_of(sizes_.begin(), sizes_.end(),
                       [](double s) { return s <= 0.5; });
  }

  double load(ElementSet s) const {
    double total = 0.0;
    for (int e : s) total += item_size(e);
    return total;
  }
  bool is_feasible(ElementSet s, double tol = 1e-12) const {
    require_within(s, size(), "knapsack");
    return load(s) <= 1.0 + tol;
  }

 private:
  std::vector<double> sizes_;
};

inline bool in_knapsack_polytope(const KnapsackConstraint& k,
                                 std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != k.size()) {
    throw InputError("in_knapsack_polytope: vector length mismatch");
  }
  double total = 0.0;
  for (int e = 0; e < k.size(); ++e) {
    if (x[static_cast<std::size_t>(e)] < -tol) return false;
    total += k.item_size(e) * x[static_cast<std::size_t>(e)];
  }
  return total <= 1.0 + tol;
}

struct ItemClasses {
  ElementSet big;    // s_e > 1/2
  ElementSet small;  // s_e <= 1/2
};

inline ItemClasses classify_items(const KnapsackConstraint& k) {
  ItemClasses c;
  for (int e = 0; e < k.size(); ++e) {
    if (k.item_size(e) > 0.5) {
      c.big.insert(e);
    } else {
      c.small.insert(e);
    }
  }
  return c;
}

/// Disjoint, sorted, half-open subintervals [lo, hi) of [0, 1].
class IntervalSet {
 public:
  struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
  };

  IntervalSet() = default;
  static IntervalSet unit() { return IntervalSet({{0.0, 1.0}}); }

  explicit IntervalSet(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    double prev = 0.0;
    for (const auto& p : pieces_) {
      if (!(p.lo >= prev && p.hi > p.lo && p.hi <= 1.0)) {
        throw InputError("IntervalSet: pieces must be sorted, disjoint, "
                         "non-empty and inside [0, 1]");
      }
      prev = p.hi;
    }
  }

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  double total_mass() const {
    double m = 0.0;
    for (const auto& p : pieces_) m += p.length();
    return m;
  }

  bool contains(double point) const {
    auto it = std::upper_bound(
        pieces_.begin(), pieces_.end(), point,
        [](double v, const Piece& p) { return v < p.hi; });
    return it != pieces_.end() && it->lo <= point;
  }

 private:
  std::vector<Piece> pieces_;
};

struct BlockResult {
  IntervalSet remaining;
  IntervalSet blocked;
};

namespace detail {

// Splits `set` by the circle range [from, to) of the glued coordinate,
// 0 <= from <= to <= total_mass.
inline void split_by_coordinate(const IntervalSet& set, double from, double to,
                                std::vector<IntervalSet::Piece>& kept,
                                std::vector<IntervalSet::Piece>& cut) {
  kept.clear();
  cut.clear();
  double offset = 0.0;
  for (const auto& p : set.pieces()) {
    const double len = p.length();
    const double a = std::clamp(from - offset, 0.0, len);
    const double b = std::clamp(to - offset, 0.0, len);
    if (a > 0.0) kept.push_back({p.lo, p.lo + a});
    if (b > a) cut.push_back({p.lo + a, p.lo + b});
    if (b < len) kept.push_back({p.lo + b, p.hi});
    offset += len;
  }
}

inline std::vector<IntervalSet::Piece> merge_pieces(
    std::vector<IntervalSet::Piece> v) {
  std::sort(v.begin(), v.end(),
            [](const auto& x, const auto& y) { return x.lo < y.lo; });
  std::vector<IntervalSet::Piece> out;
  for (const auto& p : v) {
    if (!(p.hi > p.lo)) continue;
    if (!out.empty() && p.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, p.hi);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace detail

/// Blocks the circular arc of length `mass` that starts at glued coordinate
/// `start` in [0, total_mass). Available pieces are glued left to right onto
/// a circle of circumference total_mass. A mass of at least total_mass
/// blocks everything.
inline BlockResult block_arc(const IntervalSet& available, double mass,
                             double start) {
  if (mass < 0.0) throw InputError("block_arc: negative mass");
  const double total = available.total_mass();
  if (mass >= total) return {IntervalSet(), available};
  if (mass == 0.0) return {available, IntervalSet()};
  if (!(start >= 0.0 && start < total)) {
    throw InputError("block_arc: start outside [0, total_mass)");
  }
  std::vector<IntervalSet::Piece> kept, cut;
  const double end = start + mass;
  if (end <= total) {
    detail::split_by_coordinate(available, start, end, kept, cut);
    return {IntervalSet(detail::merge_pieces(kept)),
            IntervalSet(detail::merge_pieces(cut))};
  }
  // Wrap-around: the arc is [start, total) plus [0, end - total).
  std::vector<IntervalSet::Piece> kept2, cut2;
  detail::split_by_coordinate(available, start, total, kept, cut);
  const IntervalSet head(detail::merge_pieces(kept));
  detail::split_by_coordinate(head, 0.0, end - total, kept2, cut2);
  cut.insert(cut.end(), cut2.begin(), cut2.end());
  return {IntervalSet(detail::merge_pieces(kept2)),
          IntervalSet(detail::merge_pieces(cut))};
}

/// Blocks a uniformly random arc of length `mass`; every available point is
/// blocked with probability min(mass / total_mass, 1).
inline BlockResult block_random_mass(const IntervalSet& available, double mass,
                                     Rng& rng) {
  const double total = available.total_mass();
  if (mass >= total || mass == 0.0) return block_arc(available, mass, 0.0);
  return block_arc(available, mass, rng.uniform() * total);
}

}  // namespace rocrs

#endif  // ROCRS_KNAPSACK_HPP
