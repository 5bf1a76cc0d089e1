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


#ifndef ROCRS_AUCTION_HPP
#define ROCRS_AUCTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rocrs/controllers.hpp"
#include "rocrs/error.hpp"
#include "rocrs/instances.hpp"
#include "rocrs/parallel.hpp"
#include "rocrs/random.hpp"
#include "rocrs/relaxations.hpp"
#include "rocrs/stats.hpp"

namespace rocrs {

/// Offer probabilities x[k][p] for the k-th item of a client at price p.
using MenuVector = std::vector<std::vector<double>>;

inline constexpr int kMaxClientItems = 16;

/// The items of one client in ascending id order (the tie rule favours the
/// lower id) with their value distributions.
struct MenuContext {
  std::vector<int> items;
  std::vector<std::vector<double>> pmf;
  std::vector<std::vector<double>> tail;  // tail[k][p] = Pr[v_k >= p], p = 0..B+1

  static MenuContext from_pmfs(std::vector<std::vector<double>> pmfs) {
    MenuContext ctx;
    for (std::size_t k = 0; k < pmfs.size(); ++k) ctx.items.push_back(static_cast<int>(k));
    ctx.pmf = std::move(pmfs);
    ctx.build_tails();
    return ctx;
  }
  static MenuContext for_client(const AuctionInstance& inst, int client) {
    MenuContext ctx;
    ctx.items = inst.clients.at(static_cast<std::size_t>(client));
    std::sort(ctx.items.begin(), ctx.items.end());
    if (static_cast<int>(ctx.items.size()) > kMaxClientItems) {
      throw CapacityError("auction: client " + std::to_string(client) + " has more than " +
                          std::to_string(kMaxClientItems) + " items");
    }
    for (int c : ctx.items) ctx.pmf.push_back(inst.pmf[static_cast<std::size_t>(c)]);
    ctx.build_tails();
    return ctx;
  }

  int size() const { return static_cast<int>(items.size()); }
  int max_value(int k) const { return static_cast<int>(pmf[static_cast<std::size_t>(k)].size()) - 1; }
  double tail_at(int k, int p) const {
    const auto& t = tail[static_cast<std::size_t>(k)];
    if (p <= 0) return 1.0;
    return p < static_cast<int>(t.size()) ? t[static_cast<std::size_t>(p)] : 0.0;
  }
  MenuVector zeros() const {
    MenuVector m(items.size());
    for (int k = 0; k < size(); ++k) m[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(max_value(k) + 1), 0.0);
    return m;
  }

 private:
  void build_tails() {
    tail.clear();
    for (const auto& d : pmf) {
      std::vector<double> t(d.size() + 1, 0.0);
      for (std::size_t v = d.size(); v-- > 0;) t[v] = t[v + 1] + d[v];
      tail.push_back(std::move(t));
    }
  }
};

inline void check_shape(const MenuContext& ctx, const MenuVector& x) {
  if (x.size() != ctx.items.size()) throw InputError("menu-vector: wrong number of items");
  for (int k = 0; k < ctx.size(); ++k) {
    if (static_cast<int>(x[static_cast<std::size_t>(k)].size()) != ctx.max_value(k) + 1) {
      throw InputError("menu-vector: wrong number of prices for item " + std::to_string(k));
    }
  }
}

/// sum_p x_{c,p} <= 1 per item and sum_{c,p} x_{c,p} Pr[v_c >= p] <= 1.
inline bool is_menu_vector(const MenuContext& ctx, const MenuVector& x, double tol = 1e-9) {
  check_shape(ctx, x);
  double load = 0.0;
  for (int k = 0; k < ctx.size(); ++k) {
    double s = 0.0;
    const auto& row = x[static_cast<std::size_t>(k)];
    for (std::size_t p = 0; p < row.size(); ++p) {
      if (row[p] < -tol) return false;
      s += row[p];
      load += row[p] * ctx.tail_at(k, static_cast<int>(p));
    }
    if (s > 1.0 + tol) return false;
  }
  return load <= 1.0 + tol;
}

/// Pr[X_{c,p}]: item c offered at price p ends up on top of the menu, i.e.
/// has the largest nonnegative utility v_c - p, ties going to the lower id.
/// Items are independent, so for each value v of c the competitors enter
/// as a product of "does not beat utility v - p" probabilities.
inline MenuVector top_probability_exact(const MenuContext& ctx, const MenuVector& x) {
  check_shape(ctx, x);
  const int m = ctx.size();
  int top = 0;
  for (int k = 0; k < m; ++k) top = std::max(top, ctx.max_value(k));
  // beat[d][u]: Pr[d offered with utility > u]; ties[d][u]: utility >= u.
  std::vector<std::vector<double>> beat(static_cast<std::size_t>(m)), ties(static_cast<std::size_t>(m));
  for (int d = 0; d < m; ++d) {
    auto& b = beat[static_cast<std::size_t>(d)];
    auto& t = ties[static_cast<std::size_t>(d)];
    b.assign(static_cast<std::size_t>(top + 1), 0.0);
    t.assign(static_cast<std::size_t>(top + 1), 0.0);
    const auto& row = x[static_cast<std::size_t>(d)];
    for (int u = 0; u <= top; ++u) {
      for (std::size_t p = 0; p < row.size(); ++p) {
        if (row[p] == 0.0) continue;
        const int pi = static_cast<int>(p);
        b[static_cast<std::size_t>(u)] += row[p] * ctx.tail_at(d, pi + u + 1);
        t[static_cast<std::size_t>(u)] += row[p] * ctx.tail_at(d, pi + u);
      }
    }
  }
  MenuVector out = ctx.zeros();
  for (int c = 0; c < m; ++c) {
    const auto& row = x[static_cast<std::size_t>(c)];
    const auto& pmf = ctx.pmf[static_cast<std::size_t>(c)];
    for (std::size_t p = 0; p < row.size(); ++p) {
      if (row[p] == 0.0) continue;
      double total = 0.0;
      for (std::size_t v = p; v < pmf.size(); ++v) {
        if (pmf[v] == 0.0) continue;
        const auto u = v - p;
        double none = 1.0;
        for (int d = 0; d < m; ++d) {
          if (d == c) continue;
          none *= 1.0 - (d < c ? ties : beat)[static_cast<std::size_t>(d)][u];
        }
        total += pmf[v] * none;
      }
      out[static_cast<std::size_t>(c)][p] = row[p] * total;
    }
  }
  return out;
}

/// Realized menu: the offered price per item, or -1 when absent.
using Menu = std::vector<int>;

namespace detail {

inline int draw_price(std::span<const double> row, Rng& rng) {
  std::vector<double> w(row.begin(), row.end());
  double s = 0.0;
  for (double v : w) s += v;
  w.push_back(std::max(0.0, 1.0 - s));
  const std::size_t i = rng.pick(w);
  return i + 1 >= w.size() ? -1 : static_cast<int>(i);
}

}  // namespace detail

/// Each item independently: price p with probability x_{c,p}, absent with
/// the remaining probability.
inline Menu realize_menu(const MenuVector& x, Rng& rng) {
  Menu menu(x.size(), -1);
  for (std::size_t k = 0; k < x.size(); ++k) menu[k] = detail::draw_price(x[k], rng);
  return menu;
}

inline std::vector<int> draw_values(const MenuContext& ctx, Rng& rng) {
  std::vector<int> v(ctx.items.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = static_cast<int>(rng.pick(ctx.pmf[k]));
  }
  return v;
}

/// Index of the offered item with the largest nonnegative utility; ties go
/// to the lowest index. -1 when no offer has nonnegative utility.
inline int simulate_client_choice(const Menu& menu, std::span<const int> values) {
  int best = -1;
  int best_u = -1;
  for (std::size_t k = 0; k < menu.size(); ++k) {
    if (menu[k] < 0) continue;
    const int u = values[k] - menu[k];
    if (u >= 0 && u > best_u) {
      best = static_cast<int>(k);
      best_u = u;
    }
  }
  return best;
}

struct MenuOutcome {
  Menu menu;
  std::vector<int> values;
  int chosen = -1;
  int payment = 0;
};

/// The menu is fixed before the client's values are drawn.
inline MenuOutcome play_menu(const MenuContext& ctx, Menu menu, Rng& rng) {
  MenuOutcome out;
  out.menu = std::move(menu);
  out.values = draw_values(ctx, rng);
  out.chosen = simulate_client_choice(out.menu, out.values);
  if (out.chosen >= 0) out.payment = out.menu[static_cast<std::size_t>(out.chosen)];
  return out;
}

/// First attempt: every item is discarded by a fair coin, otherwise priced
/// p with probability x_{c,p}.
inline MenuOutcome first_attempt_menu(const MenuContext& ctx, const MenuVector& x, Rng& rng) {
  check_shape(ctx, x);
  Menu menu(x.size(), -1);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const bool discard = rng.bernoulli(0.5);
    const int p = detail::draw_price(x[k], rng);
    if (!discard) menu[k] = p;
  }
  return play_menu(ctx, std::move(menu), rng);
}

/// Sampled Pr[X_{c,p}] for cross-checks.
inline MenuVector top_probability_mc(const MenuContext& ctx, const MenuVector& x,
                                     std::uint64_t samples, Rng& rng) {
  check_shape(ctx, x);
  MenuVector freq = ctx.zeros();
  for (std::uint64_t s = 0; s < samples; ++s) {
    const auto o = play_menu(ctx, realize_menu(x, rng), rng);
    if (o.chosen >= 0) freq[static_cast<std::size_t>(o.chosen)][static_cast<std::size_t>(o.payment)] += 1.0;
  }
  for (auto& row : freq) {
    for (auto& v : row) v /= static_cast<double>(samples);
  }
  return freq;
}

struct RefineRound {
  MenuVector x;
  MenuVector prob;
  std::vector<std::vector<bool>> decreased;  // membership in D^t
};

struct RefineResult {
  MenuVector y;
  MenuVector prob;  // Pr[Y_{c,p}] for the returned y
  MenuVector q;     // x_{c,p} Pr[v_c >= p] / 4
  int rounds = 0;
  std::vector<RefineRound> history;
};

inline int refine_round_budget(double eps) {
  return 10 * static_cast<int>(std::ceil(1.0 / (eps * eps)));
}

/// Local search towards q <= Pr[Y_{c,p}] <= (1 + 3 eps) q with
/// q = x_{c,p} Pr[v_c >= p] / 4: start from x / 2 and repeatedly scale by
/// (1 - eps) the entries whose top probability exceeds (1 + 2 eps) q.
inline RefineResult refine_menu_vector(const MenuContext& ctx, const MenuVector& x, double eps,
                                       bool record = false) {
  if (!(eps > 0.0 && eps <= 0.25)) throw InputError("refine_menu_vector: eps must lie in (0, 1/4]");
  if (!is_menu_vector(ctx, x)) throw DomainError("refine_menu_vector: input is not a menu-vector");
  RefineResult out;
  out.q = ctx.zeros();
  out.y = ctx.zeros();
  for (int k = 0; k < ctx.size(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    for (std::size_t p = 0; p < x[i].size(); ++p) {
      out.q[i][p] = 0.25 * x[i][p] * ctx.tail_at(k, static_cast<int>(p));
      out.y[i][p] = 0.5 * x[i][p];
    }
  }
  const int budget = refine_round_budget(eps);
  for (;;) {
    out.prob = top_probability_exact(ctx, out.y);
    bool done = true;
    std::vector<std::vector<bool>> in_d(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      in_d[k].assign(x[k].size(), false);
      for (std::size_t p = 0; p < x[k].size(); ++p) {
        const double q = out.q[k][p];
        if (q <= 0.0) continue;
        if (out.prob[k][p] > (1.0 + 3.0 * eps) * q) done = false;
        in_d[k][p] = out.prob[k][p] > (1.0 + 2.0 * eps) * q;
      }
    }
    if (record) out.history.push_back({out.y, out.prob, in_d});
    if (done) return out;
    if (out.rounds >= budget) {
      throw ContractError("refine_menu_vector: no convergence within " +
                          std::to_string(budget) + " rounds (eps=" + std::to_string(eps) + ")");
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (std::size_t p = 0; p < x[k].size(); ++p) {
        if (in_d[k][p]) out.y[k][p] *= 1.0 - eps;
      }
    }
    ++out.rounds;
  }
}

struct Sale {
  int client = 0;
  int item = 0;
  int price = 0;
};

struct AuctionOutcome {
  std::vector<int> order;
  std::vector<Sale> sales;
  ElementSet sold;
  double revenue = 0.0;
  bool feasible = true;
};

/// Random client order auction over the LP solution. Item controllers are
/// built on z_c = sum_p x_{c,p} Pr[v_c >= p]; at a client's turn the rows of
/// blocked items are zeroed and the client sees a menu drawn from the
/// refined menu-vector. Refined vectors depend only on (client, unblocked
/// items) and are cached across trials.
class AuctionMechanism {
 public:
  AuctionMechanism(AuctionInstance inst, BmumdSolution sol, double eps)
      : inst_(std::move(inst)), sol_(std::move(sol)), eps_(eps) {
    inst_.validate();
    if (!(eps > 0.0 && eps < 1.0)) throw InputError("auction: eps must lie in (0, 1)");
    for (const auto& c : inst_.constraints) {
      if (!is_matroid(c) && !std::get<KnapsackConstraint>(c).bounded()) {
        throw InputError("auction: knapsack constraints need every size at most 1/2");
      }
      lambda_ += controller_lambda(c);
      plans_.push_back(make_plan(c, sol_.z));
    }
    refine_eps_ = eps_ / (4.0 * std::max(lambda_, 1));
    for (int i = 0; i < static_cast<int>(inst_.clients.size()); ++i) {
      contexts_.push_back(MenuContext::for_client(inst_, i));
    }
    caches_ = std::make_unique<Cache[]>(contexts_.size());
  }

  const AuctionInstance& instance() const { return inst_; }
  const BmumdSolution& solution() const { return sol_; }
  double lp_bound() const { return sol_.objective; }
  int lambda() const { return lambda_; }
  double refine_eps() const { return refine_eps_; }
  /// LP* / (lambda + 4 + eps).
  double revenue_bound() const { return sol_.objective / (lambda_ + 4.0 + eps_); }
  const MenuContext& context(int client) const { return contexts_[static_cast<std::size_t>(client)]; }

  /// LP row of the client with the items outside `unblocked` zeroed.
  MenuVector client_row(int client, std::uint64_t unblocked) const {
    const auto& ctx = context(client);
    MenuVector x = ctx.zeros();
    for (int k = 0; k < ctx.size(); ++k) {
      if (!((unblocked >> k) & 1U)) continue;
      x[static_cast<std::size_t>(k)] = sol_.x[static_cast<std::size_t>(ctx.items[static_cast<std::size_t>(k)])];
    }
    return x;
  }

  const MenuVector& refined(int client, std::uint64_t unblocked) const {
    auto& cache = caches_[static_cast<std::size_t>(client)];
    {
      std::lock_guard<std::mutex> lock(cache.mutex);
      auto it = cache.menus.find(unblocked);
      if (it != cache.menus.end()) return it->second;
    }
    auto y = refine_menu_vector(context(client), client_row(client, unblocked), refine_eps_).y;
    std::lock_guard<std::mutex> lock(cache.mutex);
    return cache.menus.emplace(unblocked, std::move(y)).first->second;
  }

  AuctionOutcome run(Rng& rng) const {
    JointController jc;
    const ElementSet all = ElementSet::full(inst_.items);
    for (std::size_t i = 0; i < plans_.size(); ++i) {
      jc.add(make_controller(plans_[i], rng), all, plan_lambda(plans_[i]));
    }
    AuctionOutcome out;
    out.order = rng.permutation(static_cast<int>(inst_.clients.size()));
    for (int client : out.order) {
      const auto& ctx = context(client);
      std::uint64_t unblocked = 0;
      for (int k = 0; k < ctx.size(); ++k) {
        if (!jc.blocked(ctx.items[static_cast<std::size_t>(k)])) unblocked |= std::uint64_t{1} << k;
      }
      const auto& y = refined(client, unblocked);
      const auto o = play_menu(ctx, realize_menu(y, rng), rng);
      if (o.chosen < 0) continue;
      const int item = ctx.items[static_cast<std::size_t>(o.chosen)];
      out.sales.push_back({client, item, o.payment});
      out.sold.insert(item);
      out.revenue += o.payment;
      jc.accept(item, rng);
    }
    out.feasible = is_feasible(inst_.constraints, out.sold);
    return out;
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::uint64_t, MenuVector> menus;
  };

  AuctionInstance inst_;
  BmumdSolution sol_;
  double eps_;
  int lambda_ = 0;
  double refine_eps_ = 0.0;
  std::vector<ControllerPlan> plans_;
  std::vector<MenuContext> contexts_;
  std::unique_ptr<Cache[]> caches_;
};

/// One auction trial from scratch (solves the LP and builds the mechanism).
inline AuctionOutcome run_auction(const AuctionInstance& inst, const BmumdSolution& sol,
                                  double eps, Rng& rng) {
  return AuctionMechanism(inst, sol, eps).run(rng);
}

struct AuctionReport {
  std::uint64_t trials = 0;
  std::uint64_t infeasible = 0;
  std::vector<double> revenues;  // per trial
  MeanEstimate revenue;
  double lp_bound = 0.0;
  double bound = 0.0;
  bool pass = true;
};

inline AuctionReport estimate_auction(const AuctionMechanism& mech, std::uint64_t trials,
                                      std::uint64_t master_seed, int jobs = 1) {
  if (trials < 1) throw InputError("estimate_auction: trials must be >= 1");
  AuctionReport rep;
  rep.trials = trials;
  rep.revenues.assign(trials, 0.0);
  std::vector<std::uint64_t> bad(static_cast<std::size_t>(std::max(jobs, 1)), 0);
  parallel_chunks(trials, jobs, [&](std::uint64_t begin, std::uint64_t end, std::size_t chunk) {
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(master_seed, i));
      const auto o = mech.run(rng);
      rep.revenues[i] = o.revenue;
      if (!o.feasible) ++bad[chunk];
    }
  });
  for (auto b : bad) rep.infeasible += b;
  rep.revenue = estimate_mean(rep.revenues);
  rep.lp_bound = mech.lp_bound();
  rep.bound = mech.revenue_bound();
  rep.pass = rep.infeasible == 0 &&
             passes_lower_bound(rep.revenue.mean, rep.revenue.std_err, rep.bound);
  return rep;
}

}  // namespace rocrs

#endif  // ROCRS_AUCTION_HPP
