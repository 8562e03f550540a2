// Copyright 2026 The SGUM Toolkit Authors.
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

#ifndef SGUM_ERRORS_HPP_
#define SGUM_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgum {

// Invalid arguments or scenario data.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed text input. `line()` is 1-based; 0 when not line-oriented.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// An enumeration would exceed its configured state cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A utility was evaluated outside its domain (log of zero).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An operation was invoked on an object in the wrong mode.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sgum

#endif  // SGUM_ERRORS_HPP_
