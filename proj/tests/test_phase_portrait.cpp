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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "furuta/phase_portrait.hpp"
#include "oracles.hpp"

namespace furuta {
namespace {

using std::numbers::pi;
namespace ref = testing::ref;

const PendulumParams kP = PendulumParams::reference();
const double kMgl = kP.m1 * kP.g * kP.l1;

TEST(SubsystemDynamics, FixedPointsAndQuarterTurn) {
  EXPECT_EQ(pendulum_subsystem_dynamics(kP, 0.0, 0.0), 0.0);
  EXPECT_NEAR(pendulum_subsystem_dynamics(kP, pi, 0.0), 0.0, 1e-13);
  EXPECT_NEAR(pendulum_subsystem_dynamics(kP, pi / 2, 0.0), ref::kLockedAccelHalfPi, 1e-11);
  EXPECT_NEAR(pendulum_subsystem_dynamics(kP, pi / 2, 0.0), 47.447, 0.005);
  EXPECT_EQ(pendulum_subsystem_dynamics(kP, 1.0, 5.0), pendulum_subsystem_dynamics(kP, 1.0, -3.0));
}

TEST(SubsystemDynamics, IsArmLockedForwardDynamics) {
  // With the arm held, the pendulum row of the full model reduces to the
  // subsystem: M22 theta1'' + G2 = 0.
  testing::StateSampler sample(21);
  for (int i = 0; i < 1000; ++i) {
    const double th = sample().theta1;
    EXPECT_NEAR(pendulum_subsystem_dynamics(kP, th, 0.0),
                -gravity_vector(kP, th)[1] / mass_matrix(kP, th)(1, 1), 1e-12);
  }
}

TEST(WrapToCylinder, HalfOpenWindow) {
  EXPECT_EQ(wrap_to_cylinder(3 * pi), -pi);
  EXPECT_EQ(wrap_to_cylinder(pi), -pi);
  EXPECT_EQ(wrap_to_cylinder(-pi), -pi);
  EXPECT_EQ(wrap_to_cylinder(0.5), 0.5);
  EXPECT_NEAR(wrap_to_cylinder(-pi - 1e-9), pi - 1e-9, 1e-15);
  testing::StateSampler sample(22);
  for (int i = 0; i < 10000; ++i) {
    const double th = sample.uniform(-50.0, 50.0);
    const double w = wrap_to_cylinder(th);
    ASSERT_GE(w, -pi);
    ASSERT_LT(w, pi);
    ASSERT_NEAR(std::cos(w), std::cos(th), 1e-12);
    ASSERT_NEAR(std::sin(w), std::sin(th), 1e-12);
  }
}

TEST(SeparatrixEnergy, UprightRestLevel) {
  EXPECT_EQ(separatrix_energy(kP), 0.0);
  PendulumParams p;
  p.m1 = 2.0;
  p.g = 1.62;
  EXPECT_EQ(separatrix_energy(p), 0.0);
}

TEST(SmallOscillationPeriod, ClosedForm) {
  EXPECT_NEAR(small_oscillation_period(kP), ref::kSmallPeriod, 1e-13);
  EXPECT_NEAR(small_oscillation_period(kP), 0.9122, 0.9122e-3);
}

TEST(SmallOscillationPeriod, MatchesSimulatedZeroCrossings) {
  const double h = 1e-5;
  const auto xs = simulate_subsystem(kP, pi + 1e-3, 0.0, h, 400000);
  // Upward zero crossings of the velocity, located by linear interpolation.
  std::vector<double> crossings;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const double a = xs[k - 1][1], b = xs[k][1];
    if (a < 0.0 && b >= 0.0) crossings.push_back((static_cast<double>(k) - 1 + a / (a - b)) * h);
  }
  ASSERT_GE(crossings.size(), 3u);
  const double period =
      (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  EXPECT_NEAR(period / small_oscillation_period(kP), 1.0, 1e-6);
}

TEST(PotentialCurve, InteriorExtremaOnTwoTurns) {
  const PotentialCurve c = potential_curve(kP, {-2 * pi, 2 * pi}, 1001);
  ASSERT_EQ(c.theta.size(), 1001u);
  EXPECT_EQ(c.theta.front(), -2 * pi);
  EXPECT_EQ(c.theta.back(), 2 * pi);
  ASSERT_EQ(c.minima.size(), 2u);
  EXPECT_NEAR(c.theta[c.minima[0]], -pi, 1e-12);
  EXPECT_NEAR(c.theta[c.minima[1]], pi, 1e-12);
  EXPECT_NEAR(c.energy[c.minima[0]], ref::kHangingU, 1e-11);
  ASSERT_EQ(c.maxima.size(), 1u);
  EXPECT_NEAR(c.theta[c.maxima[0]], 0.0, 1e-12);
}

TEST(PotentialCurve, RejectsDegenerateInput) {
  EXPECT_THROW(potential_curve(kP, {1.0, 1.0}, 10), DomainError);
  EXPECT_THROW(potential_curve(kP, {2.0, 1.0}, 10), DomainError);
  EXPECT_THROW(potential_curve(kP, {0.0, 1.0}, 1), DomainError);
  EXPECT_THROW(potential_curve(kP, {0.0, INFINITY}, 10), DomainError);
}

double max_level_error(const Orbit& o) {
  double worst = 0.0;
  for (const PhasePoint& q : o.points) {
    worst = std::max(worst, std::abs(subsystem_energy(kP, q.theta1_unwrapped, q.dtheta1) - o.level));
    worst = std::max(worst, std::abs(q.energy - o.level));
  }
  return worst;
}

TEST(SweepPhaseSpace, GroundStateIsAPoint) {
  const PhasePortrait pp = sweep_phase_space(kP, {-2 * kMgl}, 100);
  ASSERT_EQ(pp.orbits.size(), 1u);
  EXPECT_EQ(pp.orbits[0].tag, OrbitTag::equilibrium);
  ASSERT_EQ(pp.orbits[0].points.size(), 1u);
  EXPECT_EQ(pp.orbits[0].points[0].theta1_unwrapped, pi);
  EXPECT_EQ(pp.orbits[0].points[0].dtheta1, 0.0);
}

TEST(SweepPhaseSpace, LibrationTurnsWhereCosineVanishes) {
  // At E = -m1 g l1 the orbit turns where cos(theta1) = 0.
  const PhasePortrait pp = sweep_phase_space(kP, {-kMgl}, 200);
  ASSERT_EQ(pp.orbits.size(), 1u);
  const Orbit& o = pp.orbits[0];
  EXPECT_EQ(o.tag, OrbitTag::libration);
  double lo = 1e9, hi = -1e9;
  for (const PhasePoint& q : o.points) {
    lo = std::min(lo, q.theta1_unwrapped);
    hi = std::max(hi, q.theta1_unwrapped);
  }
  EXPECT_NEAR(lo, pi / 2, 1e-12);
  EXPECT_NEAR(hi, 3 * pi / 2, 1e-12);
  EXPECT_LT(max_level_error(o), 1e-10);
  // Upper branch then lower branch, so the closed loop visits each sign.
  EXPECT_GT(o.points[o.points.size() / 4].dtheta1, 0.0);
  EXPECT_LT(o.points[3 * o.points.size() / 4].dtheta1, 0.0);
}

TEST(SweepPhaseSpace, TurningAnglesByBisection) {
  for (double f : {-1.9, -1.5, -0.3, -0.01}) {
    const double level = f * kMgl;
    // U(theta) = level on (0, pi); U decreases there.
    double a = 0.0, b = pi;
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (a + b);
      (potential_energy(kP, m) > level ? a : b) = m;
    }
    const PhasePortrait pp = sweep_phase_space(kP, {level}, 64);
    const Orbit& o = pp.orbits.at(0);
    EXPECT_NEAR(o.points.front().theta1_unwrapped, a, 1e-9) << f;
    EXPECT_NEAR(o.points.front().dtheta1, 0.0, 1e-6) << f;
  }
}

TEST(SweepPhaseSpace, RotationNeverStops) {
  const PhasePortrait pp = sweep_phase_space(kP, {0.1}, 300);
  ASSERT_EQ(pp.orbits.size(), 1u);
  const Orbit& o = pp.orbits[0];
  EXPECT_EQ(o.tag, OrbitTag::rotation);
  for (const PhasePoint& q : o.points) ASSERT_GT(std::abs(q.dtheta1), 0.0);
  EXPECT_LT(max_level_error(o), 1e-10);
}

TEST(SweepPhaseSpace, SeparatrixAndUprightPoint) {
  const PhasePortrait pp = sweep_phase_space(kP, {0.0}, 100);
  ASSERT_EQ(pp.orbits.size(), 2u);
  EXPECT_EQ(pp.orbits[0].tag, OrbitTag::separatrix);
  EXPECT_EQ(pp.orbits[1].tag, OrbitTag::equilibrium);
  EXPECT_EQ(pp.orbits[1].points[0].theta1, 0.0);
  EXPECT_LT(max_level_error(pp.orbits[0]), 1e-10);
}

TEST(SweepPhaseSpace, DefaultLevels) {
  const PhasePortrait pp = sweep_phase_space(kP, default_energy_levels(kP), 400);
  EXPECT_TRUE(pp.skipped.empty());
  EXPECT_EQ(pp.separatrix_energy, 0.0);
  EXPECT_NEAR(pp.ground_energy, ref::kHangingU, 1e-11);
  int separatrices = 0, equilibria = 0;
  for (std::size_t i = 0; i < pp.orbits.size(); ++i) {
    const Orbit& o = pp.orbits[i];
    EXPECT_EQ(o.id, i);
    EXPECT_LT(max_level_error(o), 1e-10) << "orbit " << i;
    separatrices += o.tag == OrbitTag::separatrix;
    equilibria += o.tag == OrbitTag::equilibrium;
    for (const PhasePoint& q : o.points) {
      ASSERT_GE(q.theta1, -pi);
      ASSERT_LT(q.theta1, pi);
      ASSERT_NEAR(q.theta1, wrap_to_cylinder(q.theta1_unwrapped), 0.0);
    }
  }
  EXPECT_EQ(separatrices, 1);
  EXPECT_EQ(equilibria, 2);
}

TEST(SweepPhaseSpace, LevelsBelowGroundAreSkipped) {
  const PhasePortrait pp = sweep_phase_space(kP, {-3 * kMgl, -kMgl}, 50);
  ASSERT_EQ(pp.skipped.size(), 1u);
  EXPECT_EQ(pp.skipped[0].level, -3 * kMgl);
  ASSERT_EQ(pp.orbits.size(), 1u);
  EXPECT_EQ(pp.orbits[0].tag, OrbitTag::libration);
}

TEST(SweepPhaseSpace, RejectsBadArguments) {
  EXPECT_THROW(sweep_phase_space(kP, {}, 100), DomainError);
  EXPECT_THROW(sweep_phase_space(kP, {0.0}, 3), DomainError);
  EXPECT_THROW(sweep_phase_space(kP, {NAN}, 100), DomainError);
}

TEST(SweepPhaseSpace, OrbitsAreInvariantUnderTheFlow) {
  // A trajectory started on a libration stays on its level and reaches the
  // same turning angle.
  const double level = -1.2 * kMgl;
  const PhasePortrait pp = sweep_phase_space(kP, {level}, 100);
  const Orbit& o = pp.orbits.at(0);
  const PhasePoint start = o.points[o.points.size() / 4];
  double turning = -1e9;
  for (const PhasePoint& q : o.points) turning = std::max(turning, q.theta1_unwrapped);
  const auto xs = simulate_subsystem(kP, start.theta1_unwrapped, start.dtheta1, 1e-4, 20000);
  double hi = -1e9;
  for (const auto& y : xs) {
    ASSERT_NEAR(subsystem_energy(kP, y[0], y[1]), level, 1e-9);
    hi = std::max(hi, y[0]);
  }
  EXPECT_NEAR(hi, turning, 1e-3);
}

}  // namespace
}  // namespace furuta
