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

// Kinematics, energies and equations of motion of the rotary inverted
// pendulum.
//
// Conventions: theta0 is the arm angle in the horizontal plane, theta1 the
// pendulum angle measured from the upward vertical (theta1 = 0 is upright,
// theta1 = pi hangs down). The potential energy is zero upright.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "furuta/params.hpp"

namespace furuta {

struct State {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double dtheta0 = 0.0;
  double dtheta1 = 0.0;

  Eigen::Vector4d vec() const { return {theta0, theta1, dtheta0, dtheta1}; }
  static State from_vec(const Eigen::Vector4d& x) { return {x[0], x[1], x[2], x[3]}; }

  Eigen::Vector2d q() const { return {theta0, theta1}; }
  Eigen::Vector2d qdot() const { return {dtheta0, dtheta1}; }

  bool is_finite() const {
    return std::isfinite(theta0) && std::isfinite(theta1) && std::isfinite(dtheta0) &&
           std::isfinite(dtheta1);
  }

  bool operator==(const State&) const = default;
};

struct CMKinematics {
  Eigen::Vector3d position;
  Eigen::Vector3d velocity;
};

/// M(q) qdd + C(q, qd) qd + G(q) = (tau, 0).
struct DynamicsMatrices {
  Eigen::Matrix2d M;
  Eigen::Matrix2d C;
  Eigen::Vector2d G;
};

enum class Stability { stable, unstable };

struct Equilibrium {
  double theta1;
  Stability kind;
  double potential_energy;
};

/// Pendulum centre of mass in the base frame.
inline Eigen::Vector3d cm_position(const PendulumParams& p, double theta0, double theta1) {
  const double s0 = std::sin(theta0), c0 = std::cos(theta0);
  const double s1 = std::sin(theta1), c1 = std::cos(theta1);
  return {p.L0 * c0 - p.l1 * s1 * s0, p.L0 * s0 + p.l1 * s1 * c0, p.l1 * c1};
}

/// Time derivative of cm_position along the state's velocities.
inline Eigen::Vector3d cm_velocity(const PendulumParams& p, const State& x) {
  const double s0 = std::sin(x.theta0), c0 = std::cos(x.theta0);
  const double s1 = std::sin(x.theta1), c1 = std::cos(x.theta1);
  const double w0 = x.dtheta0, w1 = x.dtheta1;
  return {-w0 * p.L0 * s0 - p.l1 * (w0 * s1 * c0 + w1 * c1 * s0),
          w0 * p.L0 * c0 + p.l1 * (w1 * c1 * c0 - w0 * s1 * s0),
          -w1 * p.l1 * s1};
}

inline CMKinematics cm_kinematics(const PendulumParams& p, const State& x) {
  return {cm_position(p, x.theta0, x.theta1), cm_velocity(p, x)};
}

/// |v_cm|^2 in closed form. The cross term carries no mass factor.
inline double cm_speed_squared(const PendulumParams& p, const State& x) {
  const double s1 = std::sin(x.theta1), c1 = std::cos(x.theta1);
  const double w0 = x.dtheta0, w1 = x.dtheta1;
  return p.L0 * p.L0 * w0 * w0 + p.l1 * p.l1 * (w1 * w1 + w0 * w0 * s1 * s1) +
         2.0 * p.L0 * p.l1 * w0 * w1 * c1;
}

inline double kinetic_energy(const PendulumParams& p, const State& x) {
  return 0.5 * p.I0 * x.dtheta0 * x.dtheta0 + 0.5 * p.I1 * x.dtheta1 * x.dtheta1 +
         0.5 * p.m1 * cm_speed_squared(p, x);
}

/// Gravitational energy of the pendulum, zero upright, -2 m1 g l1 hanging.
inline double potential_energy(const PendulumParams& p, double theta1) {
  return p.m1 * p.g * p.l1 * (std::cos(theta1) - 1.0);
}

inline double lagrangian(const PendulumParams& p, const State& x) {
  return kinetic_energy(p, x) - potential_energy(p, x.theta1);
}

inline double total_energy(const PendulumParams& p, const State& x) {
  return kinetic_energy(p, x) + potential_energy(p, x.theta1);
}

inline Eigen::Matrix2d mass_matrix(const PendulumParams& p, double theta1) {
  const double s1 = std::sin(theta1), c1 = std::cos(theta1);
  const double m12 = p.L0 * p.l1 * p.m1 * c1;
  Eigen::Matrix2d M;
  M << p.I0 + p.m1 * p.L0 * p.L0 + p.l1 * p.l1 * p.m1 * s1 * s1, m12,
       m12, p.I1 + p.m1 * p.l1 * p.l1;
  return M;
}

inline Eigen::Matrix2d coriolis_matrix(const PendulumParams& p, const State& x) {
  const double s1 = std::sin(x.theta1), c1 = std::cos(x.theta1);
  const double a = p.l1 * p.l1 * p.m1 * s1 * c1;
  Eigen::Matrix2d C;
  C << 2.0 * a * x.dtheta1, -p.L0 * p.l1 * p.m1 * s1 * x.dtheta1,
       -a * x.dtheta0, 0.0;
  return C;
}

inline Eigen::Vector2d gravity_vector(const PendulumParams& p, double theta1) {
  return {0.0, -p.g * p.l1 * p.m1 * std::sin(theta1)};
}

inline DynamicsMatrices dynamics_matrices(const PendulumParams& p, const State& x) {
  return {mass_matrix(p, x.theta1), coriolis_matrix(p, x), gravity_vector(p, x.theta1)};
}

/// dM/dt along the motion; M depends on time only through theta1.
inline Eigen::Matrix2d mass_matrix_rate(const PendulumParams& p, const State& x) {
  const double s1 = std::sin(x.theta1), c1 = std::cos(x.theta1);
  const double d12 = -p.L0 * p.l1 * p.m1 * s1;
  Eigen::Matrix2d dM;
  dM << 2.0 * p.l1 * p.l1 * p.m1 * s1 * c1, d12,
        d12, 0.0;
  return dM * x.dtheta1;
}

/// Joint accelerations (theta0'', theta1'') under motor torque `tau` on the
/// arm, from a Cholesky solve of the matrix form.
inline Eigen::Vector2d forward_dynamics(const PendulumParams& p, const State& x, double tau) {
  const DynamicsMatrices d = dynamics_matrices(p, x);
  const Eigen::Vector2d rhs = Eigen::Vector2d(tau, 0.0) - d.C * x.qdot() - d.G;
  Eigen::LLT<Eigen::Matrix2d> llt(d.M);
  if (llt.info() != Eigen::Success) {
    throw std::logic_error("forward_dynamics: inertia matrix is not positive definite");
  }
  return llt.solve(rhs);
}

/// Residuals of the two scalar equations of motion, written term by term and
/// independent of the matrix route. Zero iff `accel` solves the dynamics.
inline Eigen::Vector2d residual_closed_form(const PendulumParams& p, const State& x,
                                            const Eigen::Vector2d& accel, double tau) {
  const double s1 = std::sin(x.theta1), c1 = std::cos(x.theta1);
  const double w0 = x.dtheta0, w1 = x.dtheta1;
  const double a0 = accel[0], a1 = accel[1];
  const double L0 = p.L0, l1 = p.l1, m1 = p.m1;

  const double arm = p.I0 * a0 + L0 * L0 * m1 * a0 +
                     l1 * l1 * m1 * (a0 * s1 * s1 + 2.0 * w0 * w1 * s1 * c1) +
                     L0 * l1 * m1 * (a1 * c1 - w1 * w1 * s1);
  const double pendulum = p.I1 * a1 + l1 * l1 * m1 * a1 + L0 * l1 * m1 * a0 * c1 -
                          l1 * l1 * m1 * w0 * w0 * s1 * c1 - m1 * p.g * l1 * s1;
  return {arm - tau, pendulum};
}

/// The two equilibria on the cylinder: hanging (stable, reported at pi) and
/// upright (unstable, at 0). Stability follows from the sign of U''.
inline std::vector<Equilibrium> classify_equilibria(const PendulumParams& p) {
  std::vector<Equilibrium> out;
  for (double theta1 : {std::numbers::pi, 0.0}) {
    const double curvature = -p.m1 * p.g * p.l1 * std::cos(theta1);
    const Eigen::Vector2d acc = forward_dynamics(p, State{0.0, theta1, 0.0, 0.0}, 0.0);
    // sin(pi) is 1.2e-16 in double, so the hanging point only rests to ~1e-14.
    if (acc.lpNorm<Eigen::Infinity>() > 1e-12) {
      throw std::logic_error("classify_equilibria: candidate is not a fixed point");
    }
    out.push_back({theta1, curvature > 0.0 ? Stability::stable : Stability::unstable,
                   potential_energy(p, theta1)});
  }
  return out;
}

}  // namespace furuta
