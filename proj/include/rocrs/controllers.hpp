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

#ifndef ROCRS_CONTROLLERS_HPP
#define ROCRS_CONTROLLERS_HPP

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rocrs/constraint.hpp"
#include "rocrs/element_set.hpp"
#include "rocrs/error.hpp"
#include "rocrs/exchange.hpp"
#include "rocrs/knapsack.hpp"
#include "rocrs/matroid.hpp"
#include "rocrs/random.hpp"
#include "rocrs/support.hpp"

namespace rocrs {

/// Trial-independent part of a matroid controller: the support
/// decomposition of x and, per element, the entries that may control it.
/// Built once per (matroid, x) and shared read-only by all trials.
class MatroidPlan {
 public:
  MatroidPlan(Matroid m, std::span<const double> x)
      : matroid_(std::move(m)), decomposition_(decompose_support(matroid_, x)) {
    const auto n = static_cast<std::size_t>(matroid_.size());
    candidates_.resize(n);
    weights_.resize(n);
    for (std::size_t j = 0; j < decomposition_.entries.size(); ++j) {
      const auto& en = decomposition_.entries[j];
      for (int e : en.set) {
        candidates_[static_cast<std::size_t>(e)].push_back(static_cast<int>(j));
        weights_[static_cast<std::size_t>(e)].push_back(en.beta);
      }
    }
  }

  const Matroid& matroid() const { return matroid_; }
  int size() const { return matroid_.size(); }
  const SupportDecomposition& decomposition() const { return decomposition_; }
  /// Entries j with e in B_j; e picks one with probability beta_j / x_e.
  std::span<const int> candidates(int e) const {
    return candidates_[static_cast<std::size_t>(e)];
  }
  std::span<const double> weights(int e) const {
    return weights_[static_cast<std::size_t>(e)];
  }

 private:
  Matroid matroid_;
  SupportDecomposition decomposition_;
  std::vector<std::vector<int>> candidates_;
  std::vector<std::vector<double>> weights_;
};

/// Per-trial matroid controller state.
///
/// Each element with x_e > 0 owns one set of the family. e is blocked once
/// it has dropped out of its own set; elements with x_e = 0 own nothing and
/// are blocked from the start. Accepting e inserts it into every set of the
/// family, swapping out phi[C_e, B_j](e) where needed.
class MatroidController {
 public:
  static constexpr int kNone = -1;

  MatroidController(std::shared_ptr<const MatroidPlan> plan, Rng& rng)
      : plan_(std::move(plan)) {
    const int n = plan_->size();
    assignment_.assign(static_cast<std::size_t>(n), kNone);
    for (const auto& en : plan_->decomposition().entries) {
      family_.push_back(en.set);
    }
    for (int e = 0; e < n; ++e) {
      const auto c = plan_->candidates(e);
      if (c.empty()) {
        blocked_.insert(e);
        continue;
      }
      const std::size_t k = c.size() == 1 ? 0 : rng.pick(plan_->weights(e));
      assignment_[static_cast<std::size_t>(e)] = c[k];
    }
  }

  const MatroidPlan& plan() const { return *plan_; }
  int controller(int e) const { return assignment_[static_cast<std::size_t>(e)]; }
  const std::vector<ElementSet>& family() const { return family_; }
  ElementSet taken() const { return taken_; }
  ElementSet blocked_set() const { return blocked_; }
  bool blocked(int e) const { return blocked_.contains(e); }

  /// Accepts e; returns the elements that became blocked.
  ElementSet accept(int e) {
    if (blocked(e) || taken_.contains(e)) {
      throw LogicError("matroid controller: element " + std::to_string(e) +
                       " is blocked or already taken");
    }
    const Matroid& m = plan_->matroid();
    const ElementSet own = family_[static_cast<std::size_t>(controller(e))];
    ElementSet newly;
    for (std::size_t j = 0; j < family_.size(); ++j) {
      ElementSet& b = family_[j];
      if (b.contains(e)) continue;
      const ElementSet grown = b.with(e);
      // phi(e) = bottom exactly when B + e stays independent, so the
      // matching is only needed for genuine swaps.
      if (m.independent(grown)) {
        b = grown;
        continue;
      }
      const int f = build_exchange_mapping(m, own, b)(e);
      if (f < 0) {
        throw LogicError("matroid controller: exchange mapping has no image "
                         "for a dependent insertion");
      }
      b = grown.without(f);
      if (controller(f) == static_cast<int>(j) && !taken_.contains(f)) {
        newly.insert(f);
      }
    }
    taken_.insert(e);
    blocked_ = blocked_ | newly;
    return newly;
  }

  /// Every set independent and containing all taken elements.
  bool check_invariants() const {
    for (const auto& b : family_) {
      if (!plan_->matroid().is_independent(b)) return false;
      if ((taken_ & b) != taken_) return false;
    }
    return true;
  }

 private:
  std::shared_ptr<const MatroidPlan> plan_;
  std::vector<ElementSet> family_;
  std::vector<int> assignment_;
  ElementSet taken_;
  ElementSet blocked_;
};

/// Trial-independent part of a bounded-knapsack controller.
class KnapsackPlan {
 public:
  KnapsackPlan(KnapsackConstraint k, std::span<const double> x,
               double tol = kDecompositionTol)
      : knapsack_(std::move(k)) {
    if (!knapsack_.bounded()) {
      throw DomainError("knapsack controller needs every size at most 1/2; "
                        "apply the big/small reduction first");
    }
    if (static_cast<int>(x.size()) != knapsack_.size()) {
      throw InputError("knapsack controller: vector length mismatch");
    }
    if (!in_knapsack_polytope(knapsack_, x, tol)) {
      throw DomainError("knapsack controller: x outside the knapsack polytope");
    }
    for (int e = 0; e < knapsack_.size(); ++e) {
      if (x[static_cast<std::size_t>(e)] > tol) active_.insert(e);
    }
  }

  const KnapsackConstraint& knapsack() const { return knapsack_; }
  int size() const { return knapsack_.size(); }
  /// Elements that receive a controller point (x_e > 0).
  ElementSet controlled() const { return active_; }

 private:
  KnapsackConstraint knapsack_;
  ElementSet active_;
};

/// Per-trial knapsack controller: a uniform point of [0, 1] per element and
/// the set of still-available points. Accepting e removes a random arc of
/// mass 2 s_e; elements whose point is no longer available are blocked.
class KnapsackController {
 public:
  KnapsackController(std::shared_ptr<const KnapsackPlan> plan, Rng& rng)
      : plan_(std::move(plan)), available_(IntervalSet::unit()) {
    const int n = plan_->size();
    points_.assign(static_cast<std::size_t>(n), -1.0);
    for (int e = 0; e < n; ++e) {
      if (plan_->controlled().contains(e)) {
        points_[static_cast<std::size_t>(e)] = rng.uniform();
      } else {
        blocked_.insert(e);
      }
    }
  }

  const KnapsackPlan& plan() const { return *plan_; }
  /// Controller point of e, or -1 when e has none.
  double point(int e) const { return points_[static_cast<std::size_t>(e)]; }
  const IntervalSet& available() const { return available_; }
  ElementSet taken() const { return taken_; }
  ElementSet blocked_set() const { return blocked_; }
  bool blocked(int e) const { return blocked_.contains(e); }

  ElementSet accept(int e, Rng& rng) {
    if (blocked(e) || taken_.contains(e) || !available_.contains(point(e))) {
      throw LogicError("knapsack controller: element " + std::to_string(e) +
                       " is blocked or already taken");
    }
    taken_.insert(e);
    const double mass = 2.0 * plan_->knapsack().item_size(e);
    ElementSet newly;
    if (mass == 0.0) return newly;
    available_ = block_random_mass(available_, mass, rng).remaining;
    for (int f : ElementSet::full(plan_->size()) - blocked_ - taken_) {
      if (!available_.contains(point(f))) newly.insert(f);
    }
    blocked_ = blocked_ | newly;
    return newly;
  }

 private:
  std::shared_ptr<const KnapsackPlan> plan_;
  std::vector<double> points_;
  IntervalSet available_;
  ElementSet taken_;
  ElementSet blocked_;
};

using ControllerPlan = std::variant<std::shared_ptr<const MatroidPlan>,
                                    std::shared_ptr<const KnapsackPlan>>;
using Controller = std::variant<MatroidController, KnapsackController>;

inline ControllerPlan make_plan(const Constraint& c, std::span<const double> x) {
  if (const auto* m = std::get_if<Matroid>(&c)) {
    return std::make_shared<const MatroidPlan>(*m, x);
  }
  return std::make_shared<const KnapsackPlan>(std::get<KnapsackConstraint>(c), x);
}

inline Controller make_controller(const ControllerPlan& plan, Rng& rng) {
  if (const auto* m = std::get_if<std::shared_ptr<const MatroidPlan>>(&plan)) {
    return MatroidController(*m, rng);
  }
  return KnapsackController(
      std::get<std::shared_ptr<const KnapsackPlan>>(plan), rng);
}

inline int plan_lambda(const ControllerPlan& plan) {
  return std::holds_alternative<std::shared_ptr<const MatroidPlan>>(plan) ? 1 : 2;
}

/// Controllers of several constraints run side by side. Constituent i only
/// governs the elements in its coverage set; an element is blocked when any
/// constituent covering it blocks it.
class JointController {
 public:
  void add(Controller c, ElementSet coverage, int lambda) {
    parts_.push_back(std::move(c));
    coverage_.push_back(coverage);
    lambda_.push_back(lambda);
  }

  std::size_t size() const { return parts_.size(); }
  const Controller& constituent(std::size_t i) const { return parts_[i]; }
  ElementSet coverage(std::size_t i) const { return coverage_[i]; }
  int lambda(std::size_t i) const { return lambda_[i]; }
  int total_lambda() const {
    int s = 0;
    for (int l : lambda_) s += l;
    return s;
  }

  bool blocked_in(std::size_t i, int e) const {
    if (!coverage_[i].contains(e)) return false;
    return std::visit([e](const auto& c) { return c.blocked(e); }, parts_[i]);
  }
  bool blocked(int e) const {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (blocked_in(i, e)) return true;
    }
    return false;
  }
  /// Elements blocked in constituent i (restricted to its coverage).
  ElementSet blocked_set_in(std::size_t i) const {
    return coverage_[i] &
           std::visit([](const auto& c) { return c.blocked_set(); }, parts_[i]);
  }
  ElementSet blocked_set() const {
    ElementSet s;
    for (std::size_t i = 0; i < parts_.size(); ++i) s = s | blocked_set_in(i);
    return s;
  }

  /// Updates constituent i only.
  ElementSet accept_in(std::size_t i, int e, Rng& rng) {
    if (!coverage_[i].contains(e)) {
      throw LogicError("joint controller: constituent does not cover element " +
                       std::to_string(e));
    }
    ElementSet newly;
    if (auto* m = std::get_if<MatroidController>(&parts_[i])) {
      newly = m->accept(e);
    } else {
      newly = std::get<KnapsackController>(parts_[i]).accept(e, rng);
    }
    return newly & coverage_[i];
  }

  /// Updates every constituent covering e.
  ElementSet accept(int e, Rng& rng) {
    ElementSet newly;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (coverage_[i].contains(e)) newly = newly | accept_in(i, e, rng);
    }
    return newly;
  }

 private:
  std::vector<Controller> parts_;
  std::vector<ElementSet> coverage_;
  std::vector<int> lambda_;
};

}  // namespace rocrs

#endif  // ROCRS_CONTROLLERS_HPP
