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

#ifndef ROCRS_STATS_HPP
#define ROCRS_STATS_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>

#include "rocrs/error.hpp"

namespace rocrs {

/// Enumeration cap for the exhaustive routines. The environment variable
/// ROCRS_DESK_CAP, when set to a positive integer, overrides every default.
inline int enumeration_cap(int default_cap) {
  if (const char* env = std::getenv("ROCRS_DESK_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 64) {
      return static_cast<int>(v);
    }
  }
  return default_cap;
}

inline void require_cap(int n, int cap, const std::string& what) {
  if (n > cap) {
    throw CapacityError(what + ": n=" + std::to_string(n) +
                        " exceeds enumeration cap " + std::to_string(cap) +
                        " (set ROCRS_DESK_CAP to override)");
  }
}

/// Pass margin used by every statistical bound check.
inline constexpr double kStdErrMargin = 3.0;
/// z for the reported Wilson intervals (99%).
inline constexpr double kWilsonZ = 2.576;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for a binomial proportion; nullopt when trials == 0.
inline std::optional<Interval> wilson_interval(std::uint64_t successes,
                                               std::uint64_t trials, double z) {
  if (successes > trials) {
    throw InputError("wilson_interval: successes exceed trials");
  }
  if (trials == 0) return std::nullopt;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval ci{center - half, center + half};
  if (successes == 0) ci.lo = 0.0;
  if (successes == trials) ci.hi = 1.0;
  return ci;
}

/// Estimate of a probability from counted successes.
struct ProportionEstimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  bool defined() const { return trials > 0; }
  double mean() const {
    return trials == 0 ? 0.0
                       : static_cast<double>(successes) /
                             static_cast<double>(trials);
  }
  double std_err() const {
    if (trials == 0) return 0.0;
    const double p = mean();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
  std::optional<Interval> wilson(double z = kWilsonZ) const {
    return wilson_interval(successes, trials, z);
  }
};

/// Sample mean with its standard error.
struct MeanEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t count = 0;

  Interval normal_ci(double z = kWilsonZ) const {
    return {mean - z * std_err, mean + z * std_err};
  }
};

/// Summation in index order so results do not depend on scheduling.
inline MeanEstimate estimate_mean(std::span<const double> samples) {
  MeanEstimate out;
  out.count = samples.size();
  if (samples.empty()) return out;
  // Shifted sums keep constant samples exact.
  const double shift = samples.front();
  double sum = 0.0;
  for (double v : samples) sum += v - shift;
  const double dm = sum / static_cast<double>(samples.size());
  out.mean = shift + dm;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - shift - dm) * (v - shift - dm);
    const double var = ss / static_cast<double>(samples.size() - 1);
    out.std_err = std::sqrt(var / static_cast<double>(samples.size()));
  }
  return out;
}

/// The lower-bound pass rule: estimate >= bound - 3 * stderr.
inline bool passes_lower_bound(double estimate, double stderr_value,
                               double bound) {
  return estimate >= bound - kStdErrMargin * stderr_value;
}

}  // namespace rocrs

#endif  // ROCRS_STATS_HPP
