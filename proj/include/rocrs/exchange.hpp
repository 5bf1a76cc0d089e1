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

#ifndef ROCRS_EXCHANGE_HPP
#define ROCRS_EXCHANGE_HPP

#include <array>
#include <string>
#include <vector>

#include "rocrs/element_set.hpp"
#include "rocrs/error.hpp"
#include "rocrs/matroid.hpp"

namespace rocrs {

/// Image value for elements whose insertion into the target needs no swap.
inline constexpr int kBottom = -1;
/// Image value for elements outside the source set.
inline constexpr int kNotInSource = -2;

/// phi[A, B]: A -> B + {bottom} with
///   (1) phi(e) = e on A & B,
///   (2) no two elements of A share a non-bottom image,
///   (3) phi(e) = bottom implies B + e independent, otherwise
///       B - phi(e) + e independent.
struct ExchangeMapping {
  ElementSet source;
  ElementSet target;
  std::array<int, kMaxElements> image{};

  int operator()(int e) const { return image[static_cast<std::size_t>(e)]; }
};

namespace detail {

// Kuhn augmenting path over bit-mask adjacency.
inline bool augment(int a, const std::array<ElementSet, kMaxElements>& adj,
                    std::array<int, kMaxElements>& owner, ElementSet& visited) {
  for (int f : adj[static_cast<std::size_t>(a)] - visited) {
    visited.insert(f);
    int& o = owner[static_cast<std::size_t>(f)];
    if (o < 0 || augment(o, adj, owner, visited)) {
      o = a;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Builds phi[A, B] by maximum bipartite matching between
///   A' = { e in A - B : B + e dependent }
/// and B - A, with e adjacent to f when B - f + e is independent. Elements
/// of (A - B) - A' map to bottom. The matching is computed in increasing
/// element order, so the mapping is a fixed function of (A, B).
inline ExchangeMapping build_exchange_mapping(const Matroid& m, ElementSet a,
                                              ElementSet b) {
  require_within(a, m.size(), "build_exchange_mapping");
  require_within(b, m.size(), "build_exchange_mapping");
  if (!m.independent(a) || !m.independent(b)) {
    throw LogicError("build_exchange_mapping: both sets must be independent");
  }
  ExchangeMapping phi;
  phi.source = a;
  phi.target = b;
  phi.image.fill(kNotInSource);

  std::array<ElementSet, kMaxElements> adj{};
  ElementSet needs_swap;
  const ElementSet swap_targets = b - a;
  for (int e : a) {
    if (b.contains(e)) {
      phi.image[static_cast<std::size_t>(e)] = e;
      continue;
    }
    if (m.independent(b.with(e))) {
      phi.image[static_cast<std::size_t>(e)] = kBottom;
      continue;
    }
    needs_swap.insert(e);
    for (int f : swap_targets) {
      if (m.independent(b.without(f).with(e))) {
        adj[static_cast<std::size_t>(e)].insert(f);
      }
    }
  }

  std::array<int, kMaxElements> owner;
  owner.fill(-1);
  for (int e : needs_swap) {
    ElementSet visited;
    if (!detail::augment(e, adj, owner, visited)) {
      throw LogicError("build_exchange_mapping: no matching covers element " +
                       std::to_string(e) + " of " + a.str() + " into " +
                       b.str() + "; the independence oracle is not a matroid");
    }
  }
  for (int f : swap_targets) {
    const int o = owner[static_cast<std::size_t>(f)];
    if (o >= 0) phi.image[static_cast<std::size_t>(o)] = f;
  }
  return phi;
}

}  // namespace rocrs

#endif  // ROCRS_EXCHANGE_HPP
