/*
 * Copyright 2026 The netgrip Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#include "netgrip/linkage.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace netgrip;

namespace
{

const LinkageConfig& gripper()
{
  static const LinkageConfig config = fit_linkage(25.0, 84.12, 9.0);
  return config;
}

}  // namespace

TEST(Linkage, EndpointsMatchQuotedDimensions)
{
  EXPECT_NEAR(aperture(gripper(), 0.0), 25.0, 1e-6);
  EXPECT_NEAR(aperture(gripper(), 9.0), 84.12, 1e-6);
  EXPECT_NO_THROW(validate(gripper()));
}

TEST(Linkage, TipRadiiAtEndpoints)
{
  for (const Vec3& tip : claw_tips(gripper(), 0.0))
    EXPECT_NEAR(std::hypot(tip.x(), tip.y()), 12.5, 1e-6);
  for (const Vec3& tip : claw_tips(gripper(), 9.0))
    EXPECT_NEAR(std::hypot(tip.x(), tip.y()), 42.06, 1e-6);
}

TEST(Linkage, MidStrokeMatchesBisectionOracle)
{
  // Frozen from the oracle in oracles.hpp.
  constexpr double kMidAperture = 65.885240277312;
  EXPECT_NEAR(oracle::aperture(gripper(), 4.5), kMidAperture, 1e-9);
  EXPECT_NEAR(aperture(gripper(), 4.5), kMidAperture, 1e-9);
}

TEST(Linkage, InverseMatchesBisectionOracle)
{
  constexpr double kSliderFor50 = 2.033566647029;
  EXPECT_NEAR(oracle::slider_for_aperture(gripper(), 50.0), kSliderFor50, 1e-9);
  const double s = slider_for_aperture(gripper(), 50.0);
  EXPECT_NEAR(s, kSliderFor50, 1e-9);
  EXPECT_NEAR(aperture(gripper(), s), 50.0, 1e-9);
  EXPECT_EQ(slider_for_aperture(gripper(), 25.0), 0.0);
  EXPECT_EQ(slider_for_aperture(gripper(), 84.12), 9.0);
}

TEST(Linkage, RoundTripOnHundredSamples)
{
  for (int i = 0; i < 100; ++i)
  {
    const double s = 9.0 * (i + 0.5) / 100.0;
    EXPECT_NEAR(slider_for_aperture(gripper(), aperture(gripper(), s)), s, 1e-6) << "s=" << s;
  }
}

TEST(Linkage, StrictlyMonotoneOnFineGrid)
{
  double previous = aperture(gripper(), 0.0);
  for (int i = 1; i < 1000; ++i)
  {
    const double a = aperture(gripper(), 9.0 * i / 999.0);
    ASSERT_GT(a, previous) << "i=" << i;
    previous = a;
  }
}

TEST(Linkage, TipsAreEightFoldSymmetric)
{
  for (const double s : {0.0, 2.7, 9.0})
  {
    const auto tips = claw_tips(gripper(), s);
    const Eigen::Matrix3d turn = Eigen::AngleAxisd(std::numbers::pi / 4.0, Vec3::UnitZ()).toRotationMatrix();
    for (int k = 0; k < kClawCount; ++k)
    {
      const Vec3 rotated = turn * tips[k];
      EXPECT_LT((rotated - tips[(k + 1) % kClawCount]).norm(), 1e-12);
      EXPECT_NEAR(2.0 * std::hypot(tips[k].x(), tips[k].y()), aperture(gripper(), s), 1e-12);
    }
  }
}

TEST(Linkage, OutOfRangeTravelIsDomainError)
{
  EXPECT_THROW(aperture(gripper(), -0.01), DomainError);
  EXPECT_THROW(aperture(gripper(), 9.01), DomainError);
  EXPECT_THROW(claw_tips(gripper(), 10.0), DomainError);
  EXPECT_THROW(slider_for_aperture(gripper(), 24.9), DomainError);
  EXPECT_THROW(slider_for_aperture(gripper(), 90.0), DomainError);
}

TEST(Linkage, NearDegenerateFitStaysMonotone)
{
  const LinkageConfig c = fit_linkage(30.0, 30.001, 5.0);
  EXPECT_NEAR(aperture(c, 0.0), 30.0, 1e-6);
  EXPECT_NEAR(aperture(c, 5.0), 30.001, 1e-6);
  double previous = aperture(c, 0.0);
  for (int i = 1; i <= 200; ++i)
  {
    const double a = aperture(c, 5.0 * i / 200.0);
    EXPECT_GT(a, previous);
    previous = a;
  }
}

TEST(Linkage, BadFitArgumentsRejected)
{
  EXPECT_THROW(fit_linkage(0.0, 84.12, 9.0), DomainError);
  EXPECT_THROW(fit_linkage(30.0, 25.0, 9.0), DomainError);
  EXPECT_THROW(fit_linkage(25.0, 84.12, 0.0), DomainError);
}

TEST(Linkage, ValidateCatchesBrokenConfigs)
{
  LinkageConfig c = gripper();
  c.claw_count = 6;
  EXPECT_THROW(validate(c), ConstructionError);
  c = gripper();
  c.claw_length += 1.0;
  EXPECT_THROW(validate(c), ConstructionError);
}
