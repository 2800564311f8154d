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

#pragma once

#include "netgrip/common.hpp"

#include <array>

namespace netgrip
{

/// Claw linkage geometry, in the radial plane of one claw.
///
/// The claw is a rigid lever pinned to the fixed hub (connection block 2) at
/// radius `pivot_radius` in the plane z = 0 and hangs downward. A rod of
/// `rod_length` joins a pin on the claw, `rod_attach` from the pivot, to the
/// slider block (connection block 1) on the same radius. At travel s the
/// slider pin sits `slider_offset - s` below the hub plane, so driving the
/// slider up swings the claws outward and opens the gripper.
///
/// The gripper axis is +z; claw k lies in the half-plane at azimuth 45 deg * k.
struct LinkageConfig
{
  int claw_count = kClawCount;
  double travel_max = 9.0;
  double aperture_closed = 25.0;
  double aperture_open = 84.12;
  double claw_length = 0.0;
  double rod_length = 0.0;
  double pivot_radius = 0.0;
  double rod_attach = 0.0;
  double slider_offset = 0.0;
};

struct LinkageState
{
  double s = 0.0;
  std::array<Vec3, kClawCount> tip_positions;
  double aperture = 0.0;
};

/// Ratios used by fit_linkage; rod_attach and slider_offset scale with travel.
inline constexpr double kRodAttachPerTravel = 1.5;
inline constexpr double kSliderOffsetPerTravel = 3.0;
/// Smallest hub radius, as a fraction of the closed tip radius.
inline constexpr double kMinPivotFraction = 0.4;

/// Fits claw_length, rod_length and pivot_radius so the claw tips reproduce
/// both aperture endpoints, picking the rod length whose opening curve is
/// closest (least squares) to the straight line between them.
LinkageConfig fit_linkage(double aperture_closed, double aperture_open, double travel_max);

/// Throws ConstructionError when the config breaks an invariant, including
/// endpoint mismatch larger than 1e-6 mm.
void validate(const LinkageConfig& config);

/// Claw angle from the downward axis, radians.
double claw_angle(const LinkageConfig& config, double s);

double aperture(const LinkageConfig& config, double s);

std::array<Vec3, kClawCount> claw_tips(const LinkageConfig& config, double s);

LinkageState linkage_state(const LinkageConfig& config, double s);

/// Inverse of aperture(); closed form through the rod triangle.
double slider_for_aperture(const LinkageConfig& config, double d);

}  // namespace netgrip
