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

#ifndef ROCRS_TRACE_HPP
#define ROCRS_TRACE_HPP

#include <string>
#include <vector>

#include "rocrs/element_set.hpp"
#include "rocrs/error.hpp"

namespace rocrs {

/// What happened at one step of a scan.
struct StepEvents {
  ElementSet taken;
  ElementSet blocked;
};

/// Per-element characteristic sequences over steps 0..n.
///
/// S_e^t: e was taken before step t. Z_e^t: e was blocked before step t.
/// Y_e^t = 1 - S_e^t - Z_e^t. Each element stores the step at which S or Z
/// switched on, so monotonicity and S * Z = 0 hold by construction.
class CharacteristicTrace {
 public:
  static constexpr int kNever = -1;

  CharacteristicTrace() = default;
  explicit CharacteristicTrace(int n)
      : n_(n),
        taken_at_(static_cast<std::size_t>(n), kNever),
        blocked_at_(static_cast<std::size_t>(n), kNever) {
    require_ground_size(n);
  }

  int size() const { return n_; }
  int steps() const { return n_; }

  /// Marks elements blocked before any step.
  void block_initially(ElementSet s) { apply(s, blocked_at_, 0, "Z"); }

  /// Records the events of step t (0-based); they become visible at t + 1.
  void record_step(int t, const StepEvents& ev) {
    if (t < 0 || t >= n_) {
      throw InputError("record_step: step " + std::to_string(t) +
                       " outside [0, " + std::to_string(n_) + ")");
    }
    if (t < last_step_) {
      throw LogicError("record_step: steps must be recorded in order");
    }
    last_step_ = t;
    if (!(ev.taken & ev.blocked).empty()) {
      throw LogicError("record_step: element both taken and blocked");
    }
    apply(ev.taken, taken_at_, t + 1, "S");
    apply(ev.blocked, blocked_at_, t + 1, "Z");
  }

  bool resolved(int e) const {
    return taken_at_[idx(e)] != kNever || blocked_at_[idx(e)] != kNever;
  }
  int S(int e, int t) const { return on(taken_at_[idx(e)], t); }
  int Z(int e, int t) const { return on(blocked_at_[idx(e)], t); }
  int Y(int e, int t) const { return 1 - S(e, t) - Z(e, t); }

  /// First t with Y_e^t = 0, or n when e stays undecided.
  int stopping_time(int e) const {
    const int s = taken_at_[idx(e)];
    const int z = blocked_at_[idx(e)];
    if (s != kNever) return s;
    if (z != kNever) return z;
    return n_;
  }
  int taken_at(int e) const { return taken_at_[idx(e)]; }
  int blocked_at(int e) const { return blocked_at_[idx(e)]; }

 private:
  static std::size_t idx(int e) { return static_cast<std::size_t>(e); }
  static int on(int at, int t) { return at != kNever && t >= at ? 1 : 0; }

  void apply(ElementSet s, std::vector<int>& at, int when, const char* what) {
    require_within(s, n_, "CharacteristicTrace");
    for (int e : s) {
      if (resolved(e)) {
        throw LogicError(std::string("record_step: ") + what +
                         " set twice or after resolution for element " +
                         std::to_string(e));
      }
      at[idx(e)] = when;
    }
  }

  int n_ = 0;
  int last_step_ = -1;
  std::vector<int> taken_at_;
  std::vector<int> blocked_at_;
};

}  // namespace rocrs

#endif  // ROCRS_TRACE_HPP
