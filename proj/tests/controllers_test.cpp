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

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "rocrs/controllers.hpp"
#include "rocrs/error.hpp"
#include "rocrs/stats.hpp"
#include "rocrs/trace.hpp"
#include "test_util.hpp"

namespace rocrs {
namespace {

std::shared_ptr<const MatroidPlan> matroid_plan(Matroid m,
                                                std::vector<double> x) {
  return std::make_shared<const MatroidPlan>(std::move(m), x);
}

std::shared_ptr<const KnapsackPlan> knapsack_plan(std::vector<double> sizes,
                                                  std::vector<double> x) {
  return std::make_shared<const KnapsackPlan>(KnapsackConstraint(std::move(sizes)), x);
}

TEST(MatroidController, SingletonSetsForRankOne) {
  const auto plan = matroid_plan(Matroid::uniform(2, 1), {0.5, 0.5});
  Rng rng(1);
  MatroidController c(plan, rng);
  const int ja = c.controller(0);
  EXPECT_EQ(c.family()[static_cast<std::size_t>(ja)], ElementSet::of({0}));
  EXPECT_FALSE(c.blocked(0));
  EXPECT_FALSE(c.blocked(1));
  const auto newly = c.accept(0);
  EXPECT_EQ(newly, ElementSet::of({1}));
  EXPECT_TRUE(c.blocked(1));
  EXPECT_TRUE(c.check_invariants());
  EXPECT_THROW(c.accept(1), LogicError);
}

TEST(MatroidController, ZeroCoordinateHasNoController) {
  const auto plan = matroid_plan(Matroid::uniform(3, 2), {0.5, 0.0, 0.5});
  Rng rng(1);
  MatroidController c(plan, rng);
  EXPECT_EQ(c.controller(1), MatroidController::kNone);
  EXPECT_TRUE(c.blocked(1));
  EXPECT_THROW(c.accept(1), LogicError);
}

TEST(MatroidController, SingleSupportSetNeverBlocks) {
  const auto plan = matroid_plan(Matroid::uniform(3, 3), {1.0, 1.0, 1.0});
  ASSERT_EQ(plan->decomposition().entries.size(), 1U);
  Rng rng(3);
  MatroidController c(plan, rng);
  for (int e = 0; e < 3; ++e) EXPECT_TRUE(c.accept(e).empty());
}

TEST(MatroidController, ElementInEverySetLeavesFamilyUnchanged) {
  // Element 0 lies in both support sets of this decomposition.
  const auto plan = matroid_plan(Matroid::uniform(3, 2), {1.0, 0.5, 0.5});
  Rng rng(3);
  MatroidController c(plan, rng);
  const auto before = c.family();
  for (const auto& b : before) ASSERT_TRUE(b.contains(0));
  EXPECT_TRUE(c.accept(0).empty());
  EXPECT_EQ(c.family(), before);
}

TEST(MatroidController, TriangleAssignmentIsFair) {
  const double t = 2.0 / 3.0;
  const auto plan =
      matroid_plan(Matroid::graphic(3, {{0, 1}, {1, 2}, {0, 2}}), {t, t, t});
  ASSERT_EQ(plan->decomposition().entries.size(), 3U);
  const int trials = 100000;
  std::vector<std::vector<int>> hits(3, std::vector<int>(3, 0));
  for (int i = 0; i < trials; ++i) {
    Rng rng(derive_seed(9, static_cast<std::uint64_t>(i)));
    MatroidController c(plan, rng);
    for (int e = 0; e < 3; ++e) {
      ++hits[static_cast<std::size_t>(e)][static_cast<std::size_t>(c.controller(e))];
    }
  }
  const double se = std::sqrt(0.25 / trials);
  for (int e = 0; e < 3; ++e) {
    for (std::size_t j = 0; j < 3; ++j) {
      const bool covers = plan->decomposition().entries[j].set.contains(e);
      const double f = hits[static_cast<std::size_t>(e)][j] / static_cast<double>(trials);
      if (covers) {
        EXPECT_NEAR(f, 0.5, kStdErrMargin * se);
      } else {
        EXPECT_EQ(f, 0.0);
      }
    }
  }
}

TEST(MatroidController, RandomAcceptSequencesKeepInvariants) {
  Rng gen(21);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 3 + static_cast<int>(gen.below(6));
    const auto m = testing::random_matroid(gen, n);
    const auto plan = matroid_plan(m, testing::random_point(m, gen, 1.0, 4));
    Rng rng(derive_seed(5, static_cast<std::uint64_t>(rep)));
    MatroidController c(plan, rng);
    for (int e : rng.permutation(n)) {
      if (c.blocked(e)) continue;
      const auto newly = c.accept(e);
      ASSERT_TRUE(c.check_invariants());
      ASSERT_TRUE((newly & c.taken()).empty());
      for (int f = 0; f < n; ++f) {
        if (c.taken().contains(f) || c.controller(f) < 0) continue;
        ASSERT_EQ(c.blocked(f),
                  !c.family()[static_cast<std::size_t>(c.controller(f))].contains(f));
      }
    }
  }
}

TEST(KnapsackController, UnboundedIsDomainError) {
  EXPECT_THROW(knapsack_plan({0.6, 0.2}, {0.5, 0.5}), DomainError);
  EXPECT_THROW(knapsack_plan({0.5, 0.5}, {1.0, 1.5}), DomainError);
}

TEST(KnapsackController, EmptyGroundSet) {
  Rng rng(1);
  KnapsackController c(knapsack_plan({}, {}), rng);
  EXPECT_DOUBLE_EQ(c.available().total_mass(), 1.0);
}

TEST(KnapsackController, ReproduciblePoints) {
  const auto plan = knapsack_plan({0.2, 0.3, 0.1}, {0.5, 0.5, 0.5});
  Rng a(77), b(77);
  KnapsackController ca(plan, a), cb(plan, b);
  for (int e = 0; e < 3; ++e) EXPECT_EQ(ca.point(e), cb.point(e));
}

TEST(KnapsackController, PointsUncorrelated) {
  const auto plan = knapsack_plan({0.2, 0.3}, {0.5, 0.5});
  const int trials = 100000;
  std::vector<double> a(trials), b(trials);
  for (int i = 0; i < trials; ++i) {
    Rng rng(derive_seed(12, static_cast<std::uint64_t>(i)));
    KnapsackController c(plan, rng);
    a[static_cast<std::size_t>(i)] = c.point(0);
    b[static_cast<std::size_t>(i)] = c.point(1);
  }
  double ma = 0, mb = 0;
  for (int i = 0; i < trials; ++i) {
    ma += a[static_cast<std::size_t>(i)];
    mb += b[static_cast<std::size_t>(i)];
  }
  ma /= trials;
  mb /= trials;
  double sab = 0, saa = 0, sbb = 0;
  for (int i = 0; i < trials; ++i) {
    const double da = a[static_cast<std::size_t>(i)] - ma;
    const double db = b[static_cast<std::size_t>(i)] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  EXPECT_LT(std::abs(sab / std::sqrt(saa * sbb)), 0.02);
}

TEST(KnapsackController, ZeroSizeBlocksNothing) {
  const auto plan = knapsack_plan({0.0, 0.3, 0.3}, {1.0, 0.5, 0.5});
  Rng rng(2);
  KnapsackController c(plan, rng);
  EXPECT_TRUE(c.accept(0, rng).empty());
  EXPECT_DOUBLE_EQ(c.available().total_mass(), 1.0);
}

TEST(KnapsackController, SmallRemainingMassBlocksEverything) {
  // Two accepts of size 0.175 leave mass 0.3; an accept of size 0.25 needs
  // 0.5 and blocks all remaining points.
  const auto plan =
      knapsack_plan({0.175, 0.175, 0.25, 0.1, 0.1}, {0.5, 0.5, 0.5, 0.5, 0.5});
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    Rng rng(seed);
    KnapsackController c(plan, rng);
    if (c.blocked(0)) continue;
    c.accept(0, rng);
    if (c.blocked(1)) continue;
    c.accept(1, rng);
    ASSERT_NEAR(c.available().total_mass(), 0.3, 1e-12);
    if (c.blocked(2)) continue;
    c.accept(2, rng);
    EXPECT_TRUE(c.available().empty());
    EXPECT_TRUE(c.blocked(3));
    EXPECT_TRUE(c.blocked(4));
    return;
  }
  FAIL() << "no seed reached the third accept";
}

TEST(KnapsackController, BlockingFrequencyMatchesMassRatio) {
  // With e accepted first from the full interval, f (available) is blocked
  // with probability 2 s_e.
  const auto plan = knapsack_plan({0.2, 0.1}, {0.5, 0.5});
  const int trials = 100000;
  int blocked = 0;
  for (int i = 0; i < trials; ++i) {
    Rng rng(derive_seed(31, static_cast<std::uint64_t>(i)));
    KnapsackController c(plan, rng);
    if (c.accept(0, rng).contains(1)) ++blocked;
  }
  const double p = 0.4;
  EXPECT_NEAR(blocked / static_cast<double>(trials), p,
              kStdErrMargin * std::sqrt(p * (1 - p) / trials));
}

TEST(KnapsackController, AcceptedLoadStaysFeasible) {
  Rng gen(44);
  for (int rep = 0; rep < 2000; ++rep) {
    const int n = 2 + static_cast<int>(gen.below(8));
    std::vector<double> sizes(static_cast<std::size_t>(n));
    for (auto& s : sizes) s = gen.uniform() * 0.5;
    KnapsackConstraint k(sizes);
    const auto plan = std::make_shared<const KnapsackPlan>(
        k, std::vector<double>(static_cast<std::size_t>(n), 1e-3));
    Rng rng(gen.next());
    KnapsackController c(plan, rng);
    for (int e : rng.permutation(n)) {
      if (!c.blocked(e)) c.accept(e, rng);
      ASSERT_TRUE(k.is_feasible(c.taken()));
    }
  }
}

TEST(JointController, BlockedIfAnyConstituentBlocks) {
  Rng rng(1);
  JointController jc;
  const auto all = ElementSet::full(2);
  jc.add(MatroidController(matroid_plan(Matroid::uniform(2, 2), {0.5, 0.5}), rng),
         all, 1);
  jc.add(MatroidController(matroid_plan(Matroid::uniform(2, 1), {0.5, 0.5}), rng),
         all, 1);
  EXPECT_FALSE(jc.blocked(0));
  EXPECT_FALSE(jc.blocked(1));
  EXPECT_EQ(jc.total_lambda(), 2);
  jc.accept(0, rng);
  EXPECT_FALSE(jc.blocked_in(0, 1));
  EXPECT_TRUE(jc.blocked_in(1, 1));
  EXPECT_TRUE(jc.blocked(1));
}

TEST(JointController, CoverageLimitsConstituent) {
  Rng rng(1);
  JointController jc;
  jc.add(MatroidController(matroid_plan(Matroid::uniform(2, 1), {0.5, 0.0}), rng),
         ElementSet::of({0}), 1);
  // Element 1 has no controller in the constituent but is not covered by it.
  EXPECT_FALSE(jc.blocked(1));
  EXPECT_THROW(jc.accept_in(0, 1, rng), LogicError);
}

TEST(Trace, RecordStepSemantics) {
  CharacteristicTrace tr(3);
  tr.record_step(0, {});
  for (int e = 0; e < 3; ++e) EXPECT_EQ(tr.Y(e, 1), 1);
  tr.record_step(1, {ElementSet::of({0}), ElementSet::of({2})});
  EXPECT_EQ(tr.S(0, 1), 0);
  EXPECT_EQ(tr.S(0, 2), 1);
  EXPECT_EQ(tr.Y(0, 2), 0);
  EXPECT_EQ(tr.Z(2, 2), 1);
  EXPECT_EQ(tr.Z(2, 3), 1);
  EXPECT_EQ(tr.stopping_time(0), 2);
  EXPECT_EQ(tr.stopping_time(1), 3);
  for (int e = 0; e < 3; ++e) {
    for (int t = 0; t <= 3; ++t) {
      EXPECT_EQ(tr.Y(e, t), 1 - tr.S(e, t) - tr.Z(e, t));
    }
  }
}

TEST(Trace, DoubleSetIsLogicError) {
  CharacteristicTrace tr(3);
  tr.record_step(0, {ElementSet::of({0}), {}});
  EXPECT_THROW(tr.record_step(1, {ElementSet::of({0}), {}}), LogicError);
  EXPECT_THROW(tr.record_step(1, {{}, ElementSet::of({0})}), LogicError);
  CharacteristicTrace tr2(2);
  EXPECT_THROW(tr2.record_step(0, {ElementSet::of({1}), ElementSet::of({1})}),
               LogicError);
}

}  // namespace
}  // namespace rocrs
