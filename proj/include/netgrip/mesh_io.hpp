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

#include "netgrip/contact.hpp"
#include "netgrip/net.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netgrip
{

/// Snapshot of the net and object for external viewers.
struct MeshFrame
{
  double t = 0.0;
  double slider = 0.0;
  double aperture = 0.0;
  std::vector<Vec3> nodes;
  std::vector<std::uint8_t> fixed;
  std::vector<std::array<int, 2>> edges;
  std::vector<double> tensions;        // N per edge
  std::vector<std::array<int, 3>> faces;
  std::vector<Vec3> contact_forces;    // N per node
  std::optional<RigidObject> object;   // pose includes the solved offset

  bool operator==(const MeshFrame& other) const;
};

MeshFrame make_mesh_frame(const NetMesh& mesh, const EquilibriumResult& state, double t, double slider,
                          double aperture, const std::optional<RigidObject>& object, bool tension_only = false);

std::string mesh_frame_to_json(const MeshFrame& frame, int indent = -1);
MeshFrame mesh_frame_from_json(std::string_view text);

}  // namespace netgrip
