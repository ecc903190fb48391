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

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "furuta/errors.hpp"
#include "furuta/params.hpp"
#include "oracles.hpp"

namespace furuta {
namespace {

TEST(InertiaArm, ArmMassImpliedByMeasuredInertia) {
  // m0 = 0.3861 kg is 3*I0/L0^2 rounded; the bar inertia lands back on 0.0052.
  EXPECT_NEAR(inertia_arm(0.3861, 0.201), 0.0051996087, 1e-10);
  EXPECT_NEAR(inertia_arm(0.3861, 0.201), 0.0052, 1e-6);
}

TEST(InertiaArm, UnitCancels) { EXPECT_DOUBLE_EQ(inertia_arm(3.0, 1.0), 1.0); }

TEST(InertiaArm, RejectsNonPositive) {
  EXPECT_THROW(inertia_arm(0.0, 0.201), DomainError);
  EXPECT_THROW(inertia_arm(0.3861, -0.1), DomainError);
}

TEST(InertiaPendulum, BarModelNearMeasuredValue) {
  const double i1 = inertia_pendulum(0.2866, 0.30997);
  EXPECT_NEAR(i1, testing::ref::kI1Bar, 1e-15);
  EXPECT_NEAR(i1, 0.0023, 1e-5);
  EXPECT_NEAR(std::abs(i1 - 0.0023), 5.25587517e-6, 1e-12);
}

TEST(InertiaPendulum, UnitCancels) { EXPECT_DOUBLE_EQ(inertia_pendulum(12.0, 1.0), 1.0); }

TEST(InertiaPendulum, RejectsNonPositive) {
  EXPECT_THROW(inertia_pendulum(0.2866, -1.0), DomainError);
  EXPECT_THROW(inertia_pendulum(0.0, 1.0), DomainError);
}

TEST(PendulumParams, ReferenceValues) {
  const PendulumParams p = PendulumParams::reference();
  EXPECT_EQ(p.g, 9.81);
  EXPECT_EQ(p.L0, 0.201);
  EXPECT_EQ(p.L1, 0.30997);
  EXPECT_EQ(p.l1, 0.154985);
  EXPECT_EQ(p.m1, 0.2866);
  EXPECT_EQ(p.I0, 0.0052);
  EXPECT_EQ(p.I1, 0.0023);
  EXPECT_EQ(p.l1, p.L1 / 2.0);
  EXPECT_NEAR(p.implied_arm_mass(), 0.38612905621148, 1e-12);
  EXPECT_NO_THROW(p.validate());
}

TEST(PendulumParams, FromGeometryUsesBarModel) {
  const PendulumParams p = PendulumParams::from_geometry(0.3861, 0.2866, 0.201, 0.30997);
  EXPECT_DOUBLE_EQ(p.I0, 0.3861 * 0.201 * 0.201 / 3.0);
  EXPECT_DOUBLE_EQ(p.I1, 0.2866 * 0.30997 * 0.30997 / 12.0);
  EXPECT_EQ(p.l1, 0.30997 / 2.0);
}

TEST(PendulumParams, ViolationsNameEachField) {
  PendulumParams p;
  p.m1 = -1.0;
  p.I0 = std::nan("");
  const auto v = p.violations();
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].field, "m1");
  EXPECT_EQ(v[1].field, "I0");
}

TEST(PendulumParams, CentreOfMassBeyondLinkRejected) {
  PendulumParams p;
  p.l1 = p.L1 * 1.01;
  try {
    p.validate();
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.errors().size(), 1u);
    EXPECT_EQ(e.errors()[0].field, "l1");
  }
}

}  // namespace
}  // namespace furuta
