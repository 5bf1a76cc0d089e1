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

#ifndef ROCRS_ERROR_HPP
#define ROCRS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rocrs {

// Malformed input: bad element ids, inconsistent instance files, etc.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Instance exceeds an enumeration cap (subset enumeration, brute force).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Argument outside the mathematical domain of the operation, e.g. a
// fractional point outside the polytope it is supposed to lie in.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Floating point procedure failed to converge or left a residual.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A procedure whose guarantee includes termination within a round budget
// ran out of rounds.
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by the caller, or an internal invariant broke.
class LogicError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rocrs

#endif  // ROCRS_ERROR_HPP
