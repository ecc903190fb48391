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

// Time stepping of x' = f(x, tau(t)) with x = (theta0, theta1, dtheta0, dtheta1).
//
// Three steppers are provided: explicit Euler and classical RK4 on a fixed
// step, and the TR-BDF2 one-step implicit scheme with an embedded error
// estimate and step-size control. `integrate` drives any of them over a time
// span and samples the solution on a uniform grid.
//
// Torque profiles are piecewise constant, so the drivers split the span at
// profile breakpoints and never take a step across one.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "furuta/dynamics.hpp"
#include "furuta/errors.hpp"
#include "furuta/ode_settings.hpp"
#include "furuta/torque.hpp"
#include "furuta/trajectory.hpp"

namespace furuta {

/// Integration could not be completed. `partial()` holds every sample produced
/// before the failure, with `truncated` set.
class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, double t, double h)
      : std::runtime_error(what), t_(t), h_(h) {}

  double t() const noexcept { return t_; }
  double h() const noexcept { return h_; }
  const Trajectory& partial() const noexcept { return partial_; }
  void attach(Trajectory partial) {
    partial_ = std::move(partial);
    partial_.truncated = true;
  }

 private:
  double t_;
  double h_;
  Trajectory partial_;
};

/// x' for a fixed torque.
inline Eigen::Vector4d derivative(const PendulumParams& p, const State& x, double tau) {
  const Eigen::Vector2d acc = forward_dynamics(p, x, tau);
  return {x.dtheta0, x.dtheta1, acc[0], acc[1]};
}

inline Eigen::Vector4d derivative(const PendulumParams& p, const Eigen::Vector4d& x,
                                  double tau) {
  return derivative(p, State::from_vec(x), tau);
}

// Generic explicit steps for any autonomous right-hand side f(x) over a
// fixed-size Eigen vector. The phase-portrait cross-checks reuse these on the
// one-degree-of-freedom subsystem.

template <class Vec, class F>
Vec euler_step(F&& f, const Vec& x, double h) {
  return x + h * f(x);
}

template <class Vec, class F>
Vec rk4_step(F&& f, const Vec& x, double h) {
  const Vec k1 = f(x);
  const Vec k2 = f(Vec(x + 0.5 * h * k1));
  const Vec k3 = f(Vec(x + 0.5 * h * k2));
  const Vec k4 = f(Vec(x + h * k3));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline State step_euler(const PendulumParams& p, const State& x, const TorqueProfile& profile,
                        double t, double h) {
  if (!(h > 0.0)) throw DomainError("step_euler: h must be positive");
  const double tau = profile.over_step(t, h);
  const Eigen::Vector4d next =
      euler_step([&](const Eigen::Vector4d& y) { return derivative(p, y, tau); }, x.vec(), h);
  if (!next.allFinite()) throw OverflowError(t, h);
  return State::from_vec(next);
}

inline State step_rk4(const PendulumParams& p, const State& x, const TorqueProfile& profile,
                      double t, double h) {
  if (!(h > 0.0)) throw DomainError("step_rk4: h must be positive");
  const double tau = profile.over_step(t, h);
  const Eigen::Vector4d next =
      rk4_step([&](const Eigen::Vector4d& y) { return derivative(p, y, tau); }, x.vec(), h);
  if (!next.allFinite()) throw OverflowError(t, h);
  return State::from_vec(next);
}

struct StepResult {
  State next_state;
  double h_used = 0.0;
  Eigen::Vector4d error_estimate = Eigen::Vector4d::Zero();
  /// Max-norm of error_estimate weighted by abs_tol + rel_tol*|x|.
  double error_norm = 0.0;
  bool accepted = false;
  /// Step size to try next: the controller's proposal after an accepted or
  /// error-rejected step, h/2 after a Newton failure.
  double h_next = 0.0;
  /// f(next_state); valid when accepted.
  Eigen::Vector4d next_derivative = Eigen::Vector4d::Zero();
  bool newton_failed = false;
};

namespace trbdf2 {

inline const double kGamma = 2.0 - std::numbers::sqrt2;
inline const double kD = kGamma / 2.0;
// Leading local truncation error is kErrorConstant * h^3 * x'''.
inline const double kErrorConstant =
    (3.0 * kGamma * kGamma - 4.0 * kGamma + 2.0) / (12.0 * (2.0 - kGamma));

inline Eigen::Vector4d weights(const OdeSettings& s, const Eigen::Vector4d& a,
                               const Eigen::Vector4d& b) {
  return s.abs_tol + s.rel_tol * a.cwiseAbs().cwiseMax(b.cwiseAbs());
}

inline double weighted_norm(const Eigen::Vector4d& v, const Eigen::Vector4d& w) {
  return v.cwiseQuotient(w).lpNorm<Eigen::Infinity>();
}

/// Forward-difference Jacobian of `derivative` with perturbation
/// sqrt(eps) * (1 + |x_i|).
inline Eigen::Matrix4d jacobian(const PendulumParams& p, const Eigen::Vector4d& x, double tau,
                                const Eigen::Vector4d& fx) {
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Eigen::Matrix4d J;
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d xp = x;
    const double delta = sqrt_eps * (1.0 + std::abs(x[i]));
    xp[i] += delta;
    J.col(i) = (derivative(p, xp, tau) - fx) / (xp[i] - x[i]);
  }
  return J;
}

/// Solves y - d*h*f(y) = rhs by modified Newton with a frozen iteration
/// matrix. Returns false when the iteration fails to converge.
inline bool solve_stage(const PendulumParams& p, double tau, double dh,
                        const Eigen::PartialPivLU<Eigen::Matrix4d>& lu, const Eigen::Vector4d& rhs,
                        const Eigen::Vector4d& w, const OdeSettings& s, Eigen::Vector4d& y,
                        Eigen::Vector4d& fy) {
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < s.max_newton_iters; ++it) {
    fy = derivative(p, y, tau);
    const Eigen::Vector4d residual = y - dh * fy - rhs;
    const Eigen::Vector4d delta = lu.solve(-residual);
    y += delta;
    if (!y.allFinite()) return false;
    const double n = weighted_norm(delta, w);
    if (n <= s.newton_tol) {
      fy = derivative(p, y, tau);
      return true;
    }
    if (it > 0 && n > 0.9 * prev) return false;  // diverging or stalled
    prev = n;
  }
  return false;
}

struct Attempt {
  Eigen::Vector4d y1 = Eigen::Vector4d::Zero();
  Eigen::Vector4d f1 = Eigen::Vector4d::Zero();
  Eigen::Vector4d error_estimate = Eigen::Vector4d::Zero();
  double error_norm = 0.0;
  bool newton_failed = false;
};

/// Both stages of one step of size h, without the acceptance decision.
inline Attempt attempt(const PendulumParams& p, const Eigen::Vector4d& y0, double tau, double h,
                       const OdeSettings& s) {
  const Eigen::Vector4d f0 = derivative(p, y0, tau);
  const Eigen::Matrix4d J = jacobian(p, y0, tau, f0);
  const double dh = kD * h;
  const Eigen::PartialPivLU<Eigen::Matrix4d> lu(Eigen::Matrix4d::Identity() - dh * J);

  Attempt a;
  // Trapezoidal stage: y_g = y0 + d h (f0 + f(y_g)).
  Eigen::Vector4d yg = y0 + kGamma * h * f0;
  Eigen::Vector4d fg;
  if (!solve_stage(p, tau, dh, lu, y0 + dh * f0, weights(s, y0, y0), s, yg, fg)) {
    a.newton_failed = true;
    return a;
  }

  // BDF2 stage: y1 - d h f(y1) = (y_g - (1-g)^2 y0) / (g (2-g)).
  const double c = 1.0 / (kGamma * (2.0 - kGamma));
  const Eigen::Vector4d rhs = c * yg - c * (1.0 - kGamma) * (1.0 - kGamma) * y0;
  a.y1 = yg + (1.0 - kGamma) * h * fg;
  if (!solve_stage(p, tau, dh, lu, rhs, weights(s, y0, yg), s, a.y1, a.f1)) {
    a.newton_failed = true;
    return a;
  }

  const Eigen::Vector4d h3_x3 = 2.0 * h * ((a.f1 - fg) / (1.0 - kGamma) - (fg - f0) / kGamma);
  a.error_estimate = lu.solve(kErrorConstant * h3_x3);
  a.error_norm = weighted_norm(a.error_estimate, weights(s, y0, a.y1));
  return a;
}

}  // namespace trbdf2

/// One TR-BDF2 step of size h from (t, x): a trapezoidal stage to t + gamma*h
/// followed by a BDF2 stage to t + h, with gamma = 2 - sqrt(2). Both stages
/// share the iteration matrix I - (gamma/2) h J, with J a forward-difference
/// Jacobian evaluated once at x.
///
/// The error estimate is the leading truncation term, with h^3 x''' taken from
/// the quadratic through the three stage derivatives, then filtered through the
/// iteration matrix. A step is accepted when its weighted max-norm is <= 1;
/// a rejected step leaves `next_state == x`.
inline StepResult step_trbdf2(const PendulumParams& p, const State& x,
                              const TorqueProfile& profile, double t, double h,
                              const OdeSettings& s) {
  if (!(h >= s.h_min)) {
    throw IntegrationFailure("step_trbdf2: step size fell below h_min", t, h);
  }
  if (!(h <= s.h_max * (1.0 + 1e-12))) throw DomainError("step_trbdf2: h exceeds h_max");

  const trbdf2::Attempt a = trbdf2::attempt(p, x.vec(), profile.over_step(t, h), h, s);
  StepResult r;
  r.h_used = h;
  r.next_state = x;
  if (a.newton_failed) {
    r.newton_failed = true;
    r.h_next = 0.5 * h;
    return r;
  }
  r.error_estimate = a.error_estimate;
  r.error_norm = a.error_norm;
  r.accepted = a.error_norm <= 1.0;
  const double factor = a.error_norm > 0.0 ? 0.9 * std::pow(a.error_norm, -1.0 / 3.0) : 5.0;
  r.h_next = std::min(h * std::clamp(factor, 0.2, 5.0), s.h_max);
  if (r.accepted) {
    if (!a.y1.allFinite()) throw OverflowError(t, h);
    r.next_state = State::from_vec(a.y1);
    r.next_derivative = a.f1;
  }
  return r;
}

/// Cubic Hermite interpolant on [t0, t0 + h] from endpoint values and slopes,
/// evaluated at fraction `u` in [0, 1].
inline Eigen::Vector4d hermite(const Eigen::Vector4d& x0, const Eigen::Vector4d& f0,
                               const Eigen::Vector4d& x1, const Eigen::Vector4d& f1, double h,
                               double u) {
  if (u <= 0.0) return x0;
  if (u >= 1.0) return x1;
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * x0 + h10 * h * f0 + h01 * x1 + h11 * h * f1;
}

/// Observer for accepted and rejected adaptive steps: (t at step start, result).
using StepObserver = std::function<void(double, const StepResult&)>;

namespace detail {

/// Segment boundaries: t0, interior breakpoints, t1.
inline std::vector<double> segment_bounds(const TorqueProfile& profile, double t0, double t1) {
  std::vector<double> b{t0};
  for (double bp : profile.breakpoints_within(t0, t1)) b.push_back(bp);
  b.push_back(t1);
  return b;
}

inline State fixed_step(Method m, const PendulumParams& p, const State& x,
                        const TorqueProfile& profile, double t, double h, const OdeSettings& s) {
  switch (m) {
    case Method::euler: return step_euler(p, x, profile, t, h);
    case Method::rk4: return step_rk4(p, x, profile, t, h);
    case Method::trbdf2: {
      const trbdf2::Attempt a = trbdf2::attempt(p, x.vec(), profile.over_step(t, h), h, s);
      if (a.newton_failed) throw IntegrationFailure("trbdf2: Newton iteration failed", t, h);
      if (!a.y1.allFinite()) throw OverflowError(t, h);
      return State::from_vec(a.y1);
    }
  }
  return x;
}

/// Advances across [a, b] with equal substeps no longer than h.
inline State march(Method m, const PendulumParams& p, State x, const TorqueProfile& profile,
                   double a, double b, double h, const OdeSettings& s, std::size_t& steps) {
  if (!(b > a)) return x;
  const double span = b - a;
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / h - 1e-9)));
  const double dt = span / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double tk = (k + 1 == n) ? b - dt : a + static_cast<double>(k) * dt;
    x = fixed_step(m, p, x, profile, tk, dt, s);
    ++steps;
  }
  return x;
}

}  // namespace detail

/// Integrates from t_span.first to t_span.second with a fixed step h and
/// returns the final state; no sampling. Used for order measurements. The
/// TR-BDF2 stepper runs without error control here.
inline State integrate_fixed(const PendulumParams& p, const State& initial,
                             const TorqueProfile& profile, std::pair<double, double> t_span,
                             Method method, double h, const OdeSettings& s = {}) {
  if (!(h > 0.0)) throw DomainError("integrate_fixed: h must be positive");
  if (!(t_span.second > t_span.first)) throw DomainError("integrate_fixed: empty time span");
  OdeSettings st = s;
  st.h_min = std::min(st.h_min, h);
  st.h_max = std::max(st.h_max, h);
  const auto bounds = detail::segment_bounds(profile, t_span.first, t_span.second);
  State x = initial;
  std::size_t steps = 0;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    x = detail::march(method, p, x, profile, bounds[i], bounds[i + 1], h, st, steps);
  }
  return x;
}

/// Integrates over t_span and samples on t0 + k*sample_dt for every k with
/// t0 + k*sample_dt <= t1 (up to rounding). Fixed-step methods use
/// settings.h_init as the step and land exactly on every sample; TR-BDF2 steps
/// adaptively and fills the grid by cubic Hermite interpolation between
/// accepted steps.
inline Trajectory integrate(const PendulumParams& p, const State& initial,
                            const TorqueProfile& profile, std::pair<double, double> t_span,
                            Method method, const OdeSettings& s, double sample_dt,
                            const StepObserver& observer = {}) {
  const auto [t0, t1] = t_span;
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
    throw DomainError("integrate: t_span must be finite and increasing");
  }
  if (!(sample_dt > 0.0)) throw DomainError("integrate: sample_dt must be positive");
  if (!initial.is_finite()) throw DomainError("integrate: initial state must be finite");
  p.validate();
  s.validate();

  const auto n_samples =
      static_cast<std::size_t>(std::floor((t1 - t0) / sample_dt + 1e-9));
  if (n_samples < 1) throw DomainError("integrate: sample_dt exceeds the time span");
  auto sample_time = [&](std::size_t k) { return t0 + static_cast<double>(k) * sample_dt; };
  const double t_last = sample_time(n_samples);

  Trajectory tr;
  tr.params = p;
  tr.method = method;
  tr.settings = s;
  tr.profile = profile;
  tr.t.reserve(n_samples + 1);
  tr.push_back(t0, initial, profile(t0));

  try {
    if (method != Method::trbdf2) {
      State x = initial;
      for (std::size_t k = 0; k < n_samples; ++k) {
        const double a = sample_time(k), b = sample_time(k + 1);
        const auto bounds = detail::segment_bounds(profile, a, b);
        for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
          x = detail::march(method, p, x, profile, bounds[i], bounds[i + 1], s.h_init, s,
                            tr.accepted_steps);
        }
        tr.push_back(b, x, profile(b));
      }
      return tr;
    }

    std::size_t next_sample = 1;
    const auto bounds = detail::segment_bounds(profile, t0, t_last);
    State x = initial;
    double h = s.h_init;
    for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
      const double a = bounds[seg], b = bounds[seg + 1];
      const double tau = profile.over_step(a, b - a);
      Eigen::Vector4d fx = derivative(p, x, tau);
      double t = a;
      while (t < b) {
        const double remaining = b - t;
        double step = std::min(h, s.h_max);
        if (remaining <= std::min(1.1 * step, s.h_max)) step = remaining;
        // A sliver left before a breakpoint may be shorter than h_min.
        OdeSettings local = s;
        local.h_min = std::min(s.h_min, step);

        StepResult r = step_trbdf2(p, x, profile, t, step, local);
        if (observer) observer(t, r);
        if (!r.accepted) {
          ++tr.rejected_steps;
          h = r.h_next;
          if (h < s.h_min) {
            throw IntegrationFailure("trbdf2: step size fell below h_min", t, h);
          }
          continue;
        }
        ++tr.accepted_steps;
        const double t_new = (step == remaining) ? b : t + step;
        const Eigen::Vector4d x0 = x.vec();
        const Eigen::Vector4d x1 = r.next_state.vec();
        while (next_sample <= n_samples) {
          const double ts = sample_time(next_sample);
          if (ts > t_new + 1e-12 * std::max(1.0, std::abs(t_new))) break;
          const double u = (ts - t) / (t_new - t);
          tr.push_back(ts, State::from_vec(hermite(x0, fx, x1, r.next_derivative, t_new - t, u)),
                       profile(ts));
          ++next_sample;
        }
        t = t_new;
        x = r.next_state;
        fx = r.next_derivative;
        h = r.h_next;
      }
    }
    return tr;
  } catch (IntegrationFailure& e) {
    e.attach(std::move(tr));
    throw;
  } catch (const OverflowError& e) {
    IntegrationFailure f(e.what(), e.t(), e.h());
    f.attach(std::move(tr));
    throw f;
  }
}

}  // namespace furuta
