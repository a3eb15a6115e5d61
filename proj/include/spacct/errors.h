// Copyright 2026 The spacct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPACCT_ERRORS_H_
#define SPACCT_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spacct {

// Raised when an argument lies outside an operation's domain (probability
// outside [0,1], infeasible template format, unsorted epsilon grid, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an exhaustive enumeration would exceed its configured cap.
// Callers are expected to fall back to Monte-Carlo mode or shrink the
// instance.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::uint64_t cap)
      : std::runtime_error(what + " (cap " + std::to_string(cap) + ")"),
        cap_(cap) {}

  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cap_;
};

}  // namespace spacct

#endif  // SPACCT_ERRORS_H_
