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

#ifndef ROCRS_CONSTRAINT_HPP
#define ROCRS_CONSTRAINT_HPP

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rocrs/element_set.hpp"
#include "rocrs/knapsack.hpp"
#include "rocrs/matroid.hpp"

namespace rocrs {

using Constraint = std::variant<Matroid, KnapsackConstraint>;

inline int constraint_size(const Constraint& c) {
  return std::visit([](const auto& v) { return v.size(); }, c);
}

inline bool is_matroid(const Constraint& c) {
  return std::holds_alternative<Matroid>(c);
}

inline std::string constraint_name(const Constraint& c) {
  if (const auto* m = std::get_if<Matroid>(&c)) return m->kind_name();
  return "knapsack";
}

inline bool is_feasible(const Constraint& c, ElementSet s) {
  if (const auto* m = std::get_if<Matroid>(&c)) return m->is_independent(s);
  return std::get<KnapsackConstraint>(c).is_feasible(s);
}

inline bool is_feasible(std::span<const Constraint> cs, ElementSet s) {
  for (const auto& c : cs) {
    if (!is_feasible(c, s)) return false;
  }
  return true;
}

inline bool in_constraint_polytope(const Constraint& c,
                                   std::span<const double> x, double tol) {
  if (const auto* m = std::get_if<Matroid>(&c)) return in_polytope(*m, x, tol);
  return in_knapsack_polytope(std::get<KnapsackConstraint>(c), x, tol);
}

/// Per-step blocking rate of the constraint's controller, in units of
/// 1 / (remaining steps): 1 for a matroid, 2 for a bounded knapsack.
inline int controller_lambda(const Constraint& c) {
  return is_matroid(c) ? 1 : 2;
}

}  // namespace rocrs

#endif  // ROCRS_CONSTRAINT_HPP
