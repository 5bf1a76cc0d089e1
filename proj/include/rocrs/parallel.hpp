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

#ifndef ROCRS_PARALLEL_HPP
#define ROCRS_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace rocrs {

/// Splits [0, count) into `jobs` contiguous chunks and runs body(begin, end,
/// chunk) for each, on its own thread when jobs > 1. Chunk boundaries depend
/// only on (count, jobs); callers reduce per-chunk results in chunk order.
/// The first exception thrown by any chunk is rethrown.
template <typename Body>
void parallel_chunks(std::uint64_t count, int jobs, Body&& body) {
  const auto chunks = static_cast<std::uint64_t>(std::max(jobs, 1));
  auto bounds = [&](std::uint64_t c) { return count * c / chunks; };
  if (chunks == 1) {
    body(std::uint64_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> threads;
  threads.reserve(chunks);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    threads.emplace_back([&, c] {
      try {
        body(bounds(c), bounds(c + 1), static_cast<std::size_t>(c));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline int default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace rocrs

#endif  // ROCRS_PARALLEL_HPP
