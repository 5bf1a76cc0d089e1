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

#ifndef ROCRS_ELEMENT_SET_HPP
#define ROCRS_ELEMENT_SET_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "rocrs/error.hpp"

namespace rocrs {

/// Largest ground set supported. All algorithms here are desk scale, so a
/// subset of the ground set is a single machine word.
inline constexpr int kMaxElements = 64;

/// A subset of the ground set {0, ..., n-1}, stored as a bit mask.
class ElementSet {
 public:
  constexpr ElementSet() = default;
  constexpr explicit ElementSet(std::uint64_t bits) : bits_(bits) {}

  template <typename Range>
  static ElementSet of(const Range& elements) {
    ElementSet s;
    for (int e : elements) s.insert(e);
    return s;
  }
  static ElementSet of(std::initializer_list<int> elements) {
    ElementSet s;
    for (int e : elements) s.insert(e);
    return s;
  }
  static constexpr ElementSet full(int n) {
    return ElementSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int e) const { return (bits_ >> e) & 1U; }
  constexpr bool contains(ElementSet other) const {
    return (other.bits_ & ~bits_) == 0;
  }

  void insert(int e) {
    check(e);
    bits_ |= std::uint64_t{1} << e;
  }
  void erase(int e) {
    check(e);
    bits_ &= ~(std::uint64_t{1} << e);
  }
  constexpr ElementSet with(int e) const {
    return ElementSet(bits_ | (std::uint64_t{1} << e));
  }
  constexpr ElementSet without(int e) const {
    return ElementSet(bits_ & ~(std::uint64_t{1} << e));
  }
  // Lowest element; undefined on the empty set.
  constexpr int front() const { return std::countr_zero(bits_); }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(std::countr_zero(b));
    }
    return out;
  }

  // Iteration in increasing element order.
  class iterator {
   public:
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t b) : b_(b) {}
    constexpr int operator*() const { return std::countr_zero(b_); }
    constexpr iterator& operator++() {
      b_ &= b_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t b_ = 0;
  };
  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  friend constexpr ElementSet operator|(ElementSet a, ElementSet b) {
    return ElementSet(a.bits_ | b.bits_);
  }
  friend constexpr ElementSet operator&(ElementSet a, ElementSet b) {
    return ElementSet(a.bits_ & b.bits_);
  }
  friend constexpr ElementSet operator-(ElementSet a, ElementSet b) {
    return ElementSet(a.bits_ & ~b.bits_);
  }
  ElementSet& operator|=(ElementSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  ElementSet& operator&=(ElementSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  ElementSet& operator-=(ElementSet o) {
    bits_ &= ~o.bits_;
    return *this;
  }
  friend constexpr bool operator==(ElementSet, ElementSet) = default;
  friend constexpr bool operator<(ElementSet a, ElementSet b) {
    return a.bits_ < b.bits_;
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (int e : *this) {
      if (!first) s += ",";
      s += std::to_string(e);
      first = false;
    }
    return s + "}";
  }

 private:
  static void check(int e) {
    if (e < 0 || e >= kMaxElements) {
      throw InputError("element id " + std::to_string(e) +
                       " outside supported range [0, 64)");
    }
  }

  std::uint64_t bits_ = 0;
};

// Throws InputError unless every element of s is below n.
inline void require_within(ElementSet s, int n, const char* what) {
  if (!ElementSet::full(n).contains(s)) {
    throw InputError(std::string(what) + ": set " + s.str() +
                     " has an element outside ground set of size " +
                     std::to_string(n));
  }
}

inline void require_ground_size(int n) {
  if (n < 0 || n > kMaxElements) {
    throw CapacityError("ground set size " + std::to_string(n) +
                        " outside supported range [0, 64]");
  }
}

}  // namespace rocrs

#endif  // ROCRS_ELEMENT_SET_HPP
