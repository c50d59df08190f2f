// Copyright 2026 The dpspec Authors
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

#ifndef DPSPEC_ERROR_H_
#define DPSPEC_ERROR_H_

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace dpspec {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is outside the documented domain of an operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A precondition on the shape or structure of an input was violated
// (asymmetric matrix, mismatched dimensions, empty class, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// A privacy calibration has no admissible solution.
class CalibrationError : public Error {
 public:
  explicit CalibrationError(const std::string& what,
                            double max_achievable_eps =
                                std::numeric_limits<double>::quiet_NaN())
      : Error(what), max_achievable_eps_(max_achievable_eps) {}

  // Largest epsilon reachable under the violated constraint, or NaN when
  // the feasible region is empty.
  double max_achievable_eps() const { return max_achievable_eps_; }

 private:
  double max_achievable_eps_;
};

// Malformed text input. `line()` is 1-based; 0 when not line-specific.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Configuration file or command-line problem.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpspec

#endif  // DPSPEC_ERROR_H_
