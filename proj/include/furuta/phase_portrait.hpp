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

// Potential curve and phase portrait of the pendulum with the arm locked.
//
// With theta0 fixed the pendulum is a one-degree-of-freedom system with
// effective inertia J = I1 + m1*l1^2 and energy
//
//   H(theta1, dtheta1) = J/2 * dtheta1^2 + m1*g*l1*(cos(theta1) - 1).
//
// Orbits are the level sets of H, built in closed form. The phase space is the
// cylinder S^1 x R; wrapped angles use the half-open window [-pi, pi).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "furuta/dynamics.hpp"
#include "furuta/errors.hpp"
#include "furuta/integrators.hpp"
#include "furuta/params.hpp"

namespace furuta {

inline double effective_pendulum_inertia(const PendulumParams& p) {
  return p.I1 + p.m1 * p.l1 * p.l1;
}

/// theta1'' of the pendulum with the arm held still.
inline double pendulum_subsystem_dynamics(const PendulumParams& p, double theta1,
                                          double dtheta1) {
  (void)dtheta1;  // no velocity-dependent terms once the arm is locked
  return p.m1 * p.g * p.l1 * std::sin(theta1) / effective_pendulum_inertia(p);
}

inline double subsystem_energy(const PendulumParams& p, double theta1, double dtheta1) {
  return 0.5 * effective_pendulum_inertia(p) * dtheta1 * dtheta1 + potential_energy(p, theta1);
}

/// Linearised period of small librations about the hanging position.
inline double small_oscillation_period(const PendulumParams& p) {
  return 2.0 * std::numbers::pi * std::sqrt(effective_pendulum_inertia(p) / (p.m1 * p.g * p.l1));
}

/// Canonical representative of theta on [-pi, pi).
inline double wrap_to_cylinder(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta + std::numbers::pi, two_pi);
  if (r < 0.0) r += two_pi;
  double w = r - std::numbers::pi;
  if (w >= std::numbers::pi) w = -std::numbers::pi;
  return w;
}

/// Energy of the upright equilibrium at rest: the level that separates
/// librations from rotations.
inline double separatrix_energy(const PendulumParams& p) { return potential_energy(p, 0.0); }

struct PotentialCurve {
  std::vector<double> theta;
  std::vector<double> energy;
  std::vector<std::size_t> minima;  // sample indices
  std::vector<std::size_t> maxima;
};

/// n uniform samples of U(theta1) over [range.first, range.second]. Interior
/// samples where the slope changes from negative to non-negative are flagged
/// as minima, from positive to non-positive as maxima.
inline PotentialCurve potential_curve(const PendulumParams& p, std::pair<double, double> range,
                                      std::size_t n) {
  if (n < 2) throw DomainError("potential_curve: need at least two samples");
  if (!std::isfinite(range.first) || !std::isfinite(range.second) ||
      !(range.second > range.first)) {
    throw DomainError("potential_curve: degenerate angle range");
  }
  PotentialCurve c;
  c.theta.resize(n);
  c.energy.resize(n);
  const double step = (range.second - range.first) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    c.theta[i] = (i + 1 == n) ? range.second : range.first + static_cast<double>(i) * step;
    c.energy[i] = potential_energy(p, c.theta[i]);
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double left = c.energy[i] - c.energy[i - 1];
    const double right = c.energy[i + 1] - c.energy[i];
    if (left < 0.0 && right >= 0.0) c.minima.push_back(i);
    if (left > 0.0 && right <= 0.0) c.maxima.push_back(i);
  }
  return c;
}

enum class OrbitTag { libration, rotation, separatrix, equilibrium };

inline const char* orbit_tag_name(OrbitTag t) {
  switch (t) {
    case OrbitTag::libration: return "libration";
    case OrbitTag::rotation: return "rotation";
    case OrbitTag::separatrix: return "separatrix";
    case OrbitTag::equilibrium: return "equilibrium";
  }
  return "";
}

struct PhasePoint {
  double theta1;            // wrapped to [-pi, pi)
  double theta1_unwrapped;  // planar coordinate
  double dtheta1;
  double energy;
};

struct Orbit {
  std::size_t id = 0;
  OrbitTag tag = OrbitTag::libration;
  double level = 0.0;
  std::vector<PhasePoint> points;
};

struct SkippedLevel {
  double level;
  std::string reason;
};

struct PhasePortrait {
  std::vector<Orbit> orbits;
  std::vector<SkippedLevel> skipped;
  std::size_t points_per_orbit = 0;
  double separatrix_energy = 0.0;
  double ground_energy = 0.0;
};

namespace detail {

inline PhasePoint phase_point(const PendulumParams& p, double theta, double dtheta) {
  return {wrap_to_cylinder(theta), theta, dtheta, subsystem_energy(p, theta, dtheta)};
}

/// Upper branch left to right, then lower branch right to left, over
/// [lo, hi]. Endpoints with zero velocity are not repeated.
inline std::vector<PhasePoint> level_curve(const PendulumParams& p, double level, double lo,
                                           double hi, std::size_t per_branch,
                                           bool closed_at_ends) {
  const double J = effective_pendulum_inertia(p);
  auto speed = [&](double th) {
    return std::sqrt(std::max(0.0, 2.0 * (level - potential_energy(p, th)) / J));
  };
  std::vector<PhasePoint> pts;
  pts.reserve(2 * per_branch);
  const double step = (hi - lo) / static_cast<double>(per_branch - 1);
  auto theta_at = [&](std::size_t i) {
    return (i + 1 == per_branch) ? hi : lo + static_cast<double>(i) * step;
  };
  for (std::size_t i = 0; i < per_branch; ++i) {
    const double th = theta_at(i);
    pts.push_back(phase_point(p, th, speed(th)));
  }
  for (std::size_t k = 0; k < per_branch; ++k) {
    const std::size_t i = per_branch - 1 - k;
    if (closed_at_ends && (i == 0 || i + 1 == per_branch)) continue;
    const double th = theta_at(i);
    pts.push_back(phase_point(p, th, -speed(th)));
  }
  return pts;
}

}  // namespace detail

/// One orbit per energy level of the locked-arm pendulum, in input order.
///
///  - level at the ground state (-2 m1 g l1): the stable equilibrium point
///  - below the separatrix: a libration around theta1 = pi between the
///    turning angles where U(theta1) = level
///  - at the separatrix (0): the separatrix through the upright point, plus
///    the unstable equilibrium as its own single-point orbit
///  - above: a rotation covering the whole circle, both directions
///
/// Levels below the ground state are skipped and recorded in `skipped`.
inline PhasePortrait sweep_phase_space(const PendulumParams& p, const std::vector<double>& levels,
                                       std::size_t points_per_orbit) {
  if (levels.empty()) throw DomainError("sweep_phase_space: no energy levels");
  if (points_per_orbit < 4) throw DomainError("sweep_phase_space: points_per_orbit must be >= 4");
  for (double e : levels) {
    if (!std::isfinite(e)) throw DomainError("sweep_phase_space: energy levels must be finite");
  }

  constexpr double pi = std::numbers::pi;
  const double mgl = p.m1 * p.g * p.l1;
  const double ground = -2.0 * mgl;
  const double sep = separatrix_energy(p);
  const double tol = 1e-12 * mgl;
  const std::size_t per_branch = points_per_orbit / 2 + 1;

  PhasePortrait portrait;
  portrait.points_per_orbit = points_per_orbit;
  portrait.separatrix_energy = sep;
  portrait.ground_energy = ground;
  auto emit = [&](OrbitTag tag, double level, std::vector<PhasePoint> pts) {
    portrait.orbits.push_back({portrait.orbits.size(), tag, level, std::move(pts)});
  };

  for (double level : levels) {
    if (level < ground - tol) {
      portrait.skipped.push_back({level, "below the ground-state energy"});
    } else if (level <= ground + tol) {
      emit(OrbitTag::equilibrium, ground, {detail::phase_point(p, pi, 0.0)});
    } else if (level < sep - tol) {
      const double turning = std::acos(std::clamp(1.0 + level / mgl, -1.0, 1.0));
      emit(OrbitTag::libration, level,
           detail::level_curve(p, level, turning, 2.0 * pi - turning, per_branch, true));
    } else if (level <= sep + tol) {
      emit(OrbitTag::separatrix, sep,
           detail::level_curve(p, sep, 0.0, 2.0 * pi, per_branch, true));
      emit(OrbitTag::equilibrium, sep, {detail::phase_point(p, 0.0, 0.0)});
    } else {
      emit(OrbitTag::rotation, level,
           detail::level_curve(p, level, -pi, pi, points_per_orbit / 2, false));
    }
  }
  return portrait;
}

/// Default energy levels, in units of m1*g*l1: the ground state, four
/// librations, the separatrix and three rotations.
inline std::vector<double> default_energy_levels(const PendulumParams& p) {
  const double mgl = p.m1 * p.g * p.l1;
  std::vector<double> out;
  for (double f : {-2.0, -1.75, -1.5, -1.0, -0.5, 0.0, 0.25, 0.5, 1.0}) out.push_back(f * mgl);
  return out;
}

/// RK4 integration of the locked-arm pendulum from (theta1, dtheta1);
/// returns n_steps + 1 states including the start.
inline std::vector<Eigen::Vector2d> simulate_subsystem(const PendulumParams& p, double theta1,
                                                       double dtheta1, double h,
                                                       std::size_t n_steps) {
  if (!(h > 0.0)) throw DomainError("simulate_subsystem: h must be positive");
  auto f = [&p](const Eigen::Vector2d& y) -> Eigen::Vector2d {
    return {y[1], pendulum_subsystem_dynamics(p, y[0], y[1])};
  };
  std::vector<Eigen::Vector2d> out;
  out.reserve(n_steps + 1);
  out.emplace_back(theta1, dtheta1);
  for (std::size_t k = 0; k < n_steps; ++k) out.push_back(rk4_step(f, out.back(), h));
  return out;
}

}  // namespace furuta
