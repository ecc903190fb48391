// Copyright 2026 The Furuta Dynamics Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace furuta {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct FieldError {
  std::string field;
  std::string message;
};

/// Configuration rejected before any computation; carries one entry per
/// offending field.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<FieldError> errors)
      : std::invalid_argument(format(errors)), errors_(std::move(errors)) {}

  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  static std::string format(const std::vector<FieldError>& errors) {
    std::string s = "invalid configuration:";
    for (const auto& e : errors) s += " [" + e.field + ": " + e.message + "]";
    return s;
  }

  std::vector<FieldError> errors_;
};

/// A stepper produced a non-finite state.
class OverflowError : public std::runtime_error {
 public:
  OverflowError(double t, double h)
      : std::runtime_error("non-finite state at t=" + std::to_string(t) +
                           " with h=" + std::to_string(h)),
        t_(t),
        h_(h) {}
  double t() const noexcept { return t_; }
  double h() const noexcept { return h_; }

 private:
  double t_;
  double h_;
};

}  // namespace furuta
