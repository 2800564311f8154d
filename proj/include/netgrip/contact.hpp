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

#include <Eigen/Geometry>

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace netgrip
{

// Shapes are centred on the local origin; axial shapes run along local z.

struct Sphere
{
  double radius;
};

/// Cylinder of `length` along z capped by hemispheres.
struct Capsule
{
  double radius;
  double length;
};

/// Full edge lengths along x, y, z.
struct Box
{
  double a, b, c;
};

/// Semi-axes along x, y, z.
struct Ellipsoid
{
  double a, b, c;
};

/// Truncated cone of height `height`; top face at z = +h/2.
struct Frustum
{
  double r_top;
  double r_bottom;
  double height;
};

using Shape = std::variant<Sphere, Capsule, Box, Ellipsoid, Frustum>;

std::string shape_name(const Shape& shape);

struct Pose
{
  Vec3 position = Vec3::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
};

struct RigidObject
{
  Shape shape = Sphere{10.0};
  Pose pose;
  double mass = 0.0;  // kg
  double mu = 0.0;
};

/// Throws ConstructionError on non-positive dimensions, negative mass or mu.
void validate(const RigidObject& object);

/// Smallest characteristic dimension of the shape, mm.
double min_dimension(const Shape& shape);

struct SdfSample
{
  double distance;  // mm, negative inside
  Vec3 normal;      // unit, outward
};

/// Exact signed distance for every supported shape (the ellipsoid uses a
/// converged closest-point root find). `offset` translates the object.
SdfSample signed_distance(const RigidObject& object, const Vec3& point,
                          const Vec3& offset = Vec3::Zero());

struct ContactParams
{
  double k_contact = 50.0;    // N/mm
  double k_tangential = 5.0;  // N/mm, stick stiffness of the friction spring
  double mu_default = 0.5;
  double gravity = 9.81;      // m/s^2, along -z
};

void validate(const ContactParams& params);

/// Per-node stick state for regularized Coulomb friction. Anchors live in the
/// object's translated frame, so a node sticks to the object, not to space.
struct FrictionAnchor
{
  Vec3 anchor;       // node position minus object offset at stick time
  Vec3 normal;       // surface normal at the anchor; fixes the tangent plane
  double cap = 0.0;  // N, mu times the normal force that applies this step
};

struct FrictionState
{
  std::vector<std::optional<FrictionAnchor>> anchors;  // one slot per node

  bool empty() const;
};

struct ContactEvaluation
{
  double energy = 0.0;                 // N mm, penalty plus friction potential
  std::vector<Vec3> normal_forces;     // N, object on node
  std::vector<Vec3> tangential_forces; // N, object on node
  std::vector<Vec3> forces;            // sum of the two
  std::vector<Vec3> normals;           // contact normal where penetrating, else zero
  std::vector<double> distances;       // signed distance per node
  /// Sum over nodes of the reaction on the object (minus the node forces).
  Vec3 object_force = Vec3::Zero();
};

/// Penalty normal forces k |d| n on penetrating nodes and, when friction
/// anchors are given, capped tangential springs (a Huber potential, C1).
/// Energy gradient w.r.t. node i is -forces[i].
ContactEvaluation contact_forces(std::span<const Vec3> positions, const RigidObject& object,
                                 const ContactParams& params, const FrictionState* friction = nullptr,
                                 const Vec3& offset = Vec3::Zero());

/// Advances stick anchors after a converged step: new contacts stick where
/// they are, slipping contacts drag their anchors to the cone boundary,
/// separated nodes drop theirs. Caps become mu times the current normal force.
void update_friction(FrictionState& state, std::span<const Vec3> positions,
                     const RigidObject& object, const ContactParams& params,
                     const Vec3& offset = Vec3::Zero());

struct EquilibriumResult;

enum class HoldVerdict
{
  Held,
  Slips
};

struct HoldReport
{
  HoldVerdict verdict = HoldVerdict::Held;
  double margin = 0.0;          // N
  double normal_support = 0.0;  // N, upward normal reaction components
  double friction_budget = 0.0; // N, mu |Fn| over contacts not pushing down
  double weight = 0.0;          // N
};

/// Static hold verdict from a converged equilibrium:
///   margin = sum max(0, up component of the reaction) + mu sum of |Fn| over
///            contacts whose reaction has no downward component - m g.
/// Side walls (horizontal normals) count toward friction.
HoldReport hold_check(const EquilibriumResult& result, const RigidObject& object,
                      const ContactParams& params);

std::string to_string(HoldVerdict verdict);

}  // namespace netgrip
