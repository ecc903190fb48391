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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "furuta/dynamics.hpp"
#include "furuta/errors.hpp"
#include "furuta/ode_settings.hpp"
#include "furuta/params.hpp"
#include "furuta/torque.hpp"

namespace furuta {

/// Uniformly sampled solution of the pendulum equations together with the
/// inputs that produced it.
struct Trajectory {
  PendulumParams params;
  Method method = Method::rk4;
  OdeSettings settings;
  TorqueProfile profile;

  std::vector<double> t;
  std::vector<State> states;
  std::vector<double> tau;
  std::vector<double> K;
  std::vector<double> U;
  std::vector<double> E;

  bool truncated = false;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }

  void push_back(double time, const State& x, double torque) {
    t.push_back(time);
    states.push_back(x);
    tau.push_back(torque);
    const double k = kinetic_energy(params, x);
    const double u = potential_energy(params, x.theta1);
    K.push_back(k);
    U.push_back(u);
    E.push_back(k + u);
  }

  /// Appends a sample whose energies were stored elsewhere (file readers).
  void push_back(double time, const State& x, double torque, double k, double u, double e) {
    t.push_back(time);
    states.push_back(x);
    tau.push_back(torque);
    K.push_back(k);
    U.push_back(u);
    E.push_back(e);
  }
};

enum class Channel { theta0, theta1, dtheta0, dtheta1, energy };

inline constexpr std::array<Channel, 5> kChannels = {
    Channel::theta0, Channel::theta1, Channel::dtheta0, Channel::dtheta1, Channel::energy};

inline const char* channel_name(Channel c) {
  switch (c) {
    case Channel::theta0: return "theta0";
    case Channel::theta1: return "theta1";
    case Channel::dtheta0: return "dtheta0";
    case Channel::dtheta1: return "dtheta1";
    case Channel::energy: return "E";
  }
  return "";
}

inline double channel_value(const Trajectory& tr, std::size_t i, Channel c) {
  const State& x = tr.states[i];
  switch (c) {
    case Channel::theta0: return x.theta0;
    case Channel::theta1: return x.theta1;
    case Channel::dtheta0: return x.dtheta0;
    case Channel::dtheta1: return x.dtheta1;
    case Channel::energy: return tr.E[i];
  }
  return 0.0;
}

struct ChannelError {
  double max_abs = 0.0;
  double rms = 0.0;
  double t_max = 0.0;
};

struct ErrorReport {
  std::array<ChannelError, kChannels.size()> channels{};
  double t_begin = 0.0;
  double t_end = 0.0;
  std::size_t samples = 0;

  const ChannelError& operator[](Channel c) const {
    return channels[static_cast<std::size_t>(c)];
  }
  ChannelError& operator[](Channel c) { return channels[static_cast<std::size_t>(c)]; }
};

/// Linear interpolation of one channel of `tr` at time `time`, which must lie
/// in [t.front(), t.back()]. Exact at sample times.
inline double interpolate_channel(const Trajectory& tr, double time, Channel c) {
  auto it = std::lower_bound(tr.t.begin(), tr.t.end(), time);
  std::size_t i = static_cast<std::size_t>(it - tr.t.begin());
  if (i < tr.size() && tr.t[i] == time) return channel_value(tr, i, c);
  if (i == 0) return channel_value(tr, 0, c);
  if (i >= tr.size()) return channel_value(tr, tr.size() - 1, c);
  const double t0 = tr.t[i - 1], t1 = tr.t[i];
  const double w = (time - t0) / (t1 - t0);
  const double v0 = channel_value(tr, i - 1, c), v1 = channel_value(tr, i, c);
  return v0 + w * (v1 - v0);
}

/// Per-channel discrepancy of `b` against `a` over their common time span,
/// evaluated on `a`'s samples with `b` linearly resampled.
inline ErrorReport compare_trajectories(const Trajectory& a, const Trajectory& b) {
  if (!(a.params == b.params)) {
    throw DomainError("compare_trajectories: trajectories were produced with different parameters");
  }
  if (a.size() < 2 || b.size() < 2) {
    throw DomainError("compare_trajectories: trajectories need at least two samples");
  }
  const double lo = std::max(a.t.front(), b.t.front());
  const double hi = std::min(a.t.back(), b.t.back());
  if (!(lo <= hi)) throw DomainError("compare_trajectories: time spans do not overlap");

  ErrorReport r;
  r.t_begin = lo;
  r.t_end = hi;
  for (auto& ce : r.channels) ce.t_max = lo;
  std::array<double, kChannels.size()> sumsq{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ti = a.t[i];
    if (ti < lo || ti > hi) continue;
    ++r.samples;
    for (Channel c : kChannels) {
      const double d = std::abs(channel_value(a, i, c) - interpolate_channel(b, ti, c));
      ChannelError& ce = r[c];
      if (d > ce.max_abs) {
        ce.max_abs = d;
        ce.t_max = ti;
      }
      sumsq[static_cast<std::size_t>(c)] += d * d;
    }
  }
  if (r.samples == 0) throw DomainError("compare_trajectories: no samples in the common span");
  for (std::size_t k = 0; k < kChannels.size(); ++k) {
    r.channels[k].rms = std::sqrt(sumsq[k] / static_cast<double>(r.samples));
  }
  return r;
}

}  // namespace furuta
