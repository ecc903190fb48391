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
#include <cstddef>
#include <vector>

#include "furuta/dynamics.hpp"
#include "furuta/integrators.hpp"
#include "furuta/ode_settings.hpp"
#include "furuta/params.hpp"
#include "furuta/torque.hpp"
#include "furuta/trajectory.hpp"

namespace furuta {

/// Everything needed to reproduce one simulation run.
///
/// The defaults describe the step-torque experiment: the pendulum starts at
/// rest upright, the motor applies 0.5 N*m for 0.2 s, and the system is
/// followed for 5 s, sampled every millisecond. RK4 at h = 1e-4 s is the
/// default stepper; TR-BDF2 is selected through `method`.
struct ExperimentConfig {
  PendulumParams params = PendulumParams::reference();
  State initial{};
  TorqueProfile profile = step_torque_profile(0.5, 0.2);
  Method method = Method::rk4;
  OdeSettings settings = default_settings();
  double t_end = 5.0;
  double sample_dt = 1e-3;

  static OdeSettings default_settings() {
    OdeSettings s;
    s.h_init = 1e-4;
    return s;
  }
};

/// Runs the configured experiment over [0, t_end]. Integration failures
/// propagate as IntegrationFailure with the partial trajectory attached.
inline Trajectory run_experiment(const ExperimentConfig& c) {
  if (!(c.t_end > 0.0)) throw DomainError("run_experiment: t_end must be positive");
  return integrate(c.params, c.initial, c.profile, {0.0, c.t_end}, c.method, c.settings,
                   c.sample_dt);
}

/// Cumulative injected work W(t_k) = integral of dtheta0 * tau, by the
/// trapezoid rule on the samples. Each interval uses the torque held over it,
/// so a switch-off that lands on a sample is not smeared.
inline std::vector<double> work_trapezoid(const Trajectory& tr) {
  std::vector<double> w(tr.size(), 0.0);
  for (std::size_t k = 1; k < tr.size(); ++k) {
    const double dt = tr.t[k] - tr.t[k - 1];
    const double tau = tr.profile.over_step(tr.t[k - 1], dt);
    w[k] = w[k - 1] + 0.5 * dt * tau * (tr.states[k - 1].dtheta0 + tr.states[k].dtheta0);
  }
  return w;
}

/// Cumulative injected work for piecewise-constant torque: on an interval
/// where tau is constant, the integral of dtheta0 * tau is tau * delta theta0.
/// Exact when every profile breakpoint is a sample time.
inline std::vector<double> work_piecewise_exact(const Trajectory& tr) {
  std::vector<double> w(tr.size(), 0.0);
  for (std::size_t k = 1; k < tr.size(); ++k) {
    const double dt = tr.t[k] - tr.t[k - 1];
    const double tau = tr.profile.over_step(tr.t[k - 1], dt);
    w[k] = w[k - 1] + tau * (tr.states[k].theta0 - tr.states[k - 1].theta0);
  }
  return w;
}

/// max_k |E(t_k) - E(t_0) - W(t_k)|.
inline double power_balance_error(const Trajectory& tr, const std::vector<double>& work) {
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    worst = std::max(worst, std::abs(tr.E[k] - tr.E[0] - work[k]));
  }
  return worst;
}

/// Peak-to-peak variation of E over samples with t >= t_from.
inline double energy_variation(const Trajectory& tr, double t_from) {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    if (tr.t[k] < t_from) continue;
    if (!any) {
      lo = hi = tr.E[k];
      any = true;
    }
    lo = std::min(lo, tr.E[k]);
    hi = std::max(hi, tr.E[k]);
  }
  return hi - lo;
}

}  // namespace furuta
