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

// Library-driven setups shared by several test binaries.

#pragma once

#include "netgrip/contact.hpp"
#include "netgrip/linkage.hpp"
#include "netgrip/net.hpp"

namespace fixture
{

inline const netgrip::LinkageConfig& gripper()
{
  static const netgrip::LinkageConfig config = netgrip::fit_linkage(25.0, 84.12, 9.0);
  return config;
}

/// Rest shape on the closed claw tips.
inline netgrip::NetBuildParams closed_net(int rings = 6, int segments = 16)
{
  const netgrip::Vec3 tip = netgrip::claw_tips(gripper(), 0.0)[0];
  netgrip::NetBuildParams p;
  p.rings = rings;
  p.segments = segments;
  p.top_radius = 4.0;
  p.bottom_radius = tip.x();
  p.depth = -tip.z();
  return p;
}

inline netgrip::RigidObject sphere(double radius, double z, double mass, double mu = 0.5)
{
  netgrip::RigidObject o;
  o.shape = netgrip::Sphere{radius};
  o.pose.position = netgrip::Vec3(0.0, 0.0, z);
  o.mass = mass;
  o.mu = mu;
  return o;
}

/// Closes the open net onto `load` in warm-started steps of 0.25 mm down to
/// `slider`, the way the controller does.
inline netgrip::EquilibriumResult close_onto(const netgrip::NetMesh& mesh, const netgrip::ObjectLoad& load,
                                             double slider, double from = 9.0)
{
  netgrip::EquilibriumResult r = netgrip::solve_equilibrium(mesh, netgrip::claw_tips(gripper(), from), nullptr, {});
  for (double s = from - 0.25; s > slider; s -= 0.25)
    r = netgrip::solve_equilibrium(mesh, netgrip::claw_tips(gripper(), s), &load, {}, &r.positions, nullptr,
                                   r.object_offset);
  return netgrip::solve_equilibrium(mesh, netgrip::claw_tips(gripper(), slider), &load, {}, &r.positions, nullptr,
                                    r.object_offset);
}

}  // namespace fixture
