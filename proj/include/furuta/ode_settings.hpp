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

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "furuta/errors.hpp"

namespace furuta {

enum class Method { euler, rk4, trbdf2 };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::euler: return "euler";
    case Method::rk4: return "rk4";
    case Method::trbdf2: return "trbdf2";
  }
  return "rk4";
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "euler") return Method::euler;
  if (s == "rk4") return Method::rk4;
  if (s == "trbdf2") return Method::trbdf2;
  return std::nullopt;
}

/// Step-size and tolerance controls. Fixed-step methods advance with
/// `h_init` and ignore the rest.
struct OdeSettings {
  double rel_tol = 1e-3;
  Eigen::Vector4d abs_tol = Eigen::Vector4d::Constant(1e-6);
  double h_init = 1e-3;
  double h_min = 1e-10;
  double h_max = 0.05;
  int max_newton_iters = 10;
  double newton_tol = 1e-3;

  std::vector<FieldError> violations() const {
    std::vector<FieldError> out;
    if (!(rel_tol >= 1e-14) || !std::isfinite(rel_tol)) {
      out.push_back({"rel_tol", "must be finite and >= 1e-14"});
    }
    if (!abs_tol.allFinite() || !(abs_tol.minCoeff() > 0.0)) {
      out.push_back({"abs_tol", "every component must be finite and positive"});
    }
    for (auto [name, v] : {std::pair{"h_init", h_init}, {"h_min", h_min}, {"h_max", h_max},
                           {"newton_tol", newton_tol}}) {
      if (!std::isfinite(v) || !(v > 0.0)) out.push_back({name, "must be finite and positive"});
    }
    if (max_newton_iters < 1) out.push_back({"max_newton_iters", "must be at least 1"});
    if (out.empty() && !(h_min <= h_init && h_init <= h_max)) {
      out.push_back({"h_init", "must satisfy h_min <= h_init <= h_max"});
    }
    return out;
  }

  void validate() const {
    auto v = violations();
    if (!v.empty()) throw ValidationError(std::move(v));
  }

  bool operator==(const OdeSettings&) const = default;
};

}  // namespace furuta
