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
#include "netgrip/contact.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace netgrip
{

struct NetEdge
{
  int a;
  int b;
  double rest_length;  // mm
  double stiffness;    // N/mm
};

struct NetBuildParams
{
  int rings = 6;
  int segments = 16;
  double top_radius = 4.0;      // hub ring, attached to connection block 2
  double bottom_radius = 12.5;  // rim ring, carries the claw tips
  double depth = 48.0;          // hub plane to rim plane
  double stiffness = 0.5;       // N/mm per belt element
  double belt_area = 1.0;       // mm^2, for stress reporting
};

/// Triangulated truncated cone of belt springs.
///
/// Node 0 is the hub centre; the hub ring follows (segments nodes at
/// top_radius, z = 0); then `rings` latitude rings down to the rim at
/// z = -depth. The hub centre and hub ring form the apex group and are always
/// fixed. Rim node j is bound to claw j / (segments / 8) when j is a multiple
/// of segments / 8; the rim nodes between claws are free.
struct NetMesh
{
  int rings = 0;
  int segments = 0;
  double belt_area = 1.0;
  std::vector<Vec3> rest_positions;
  std::vector<std::uint8_t> fixed;
  std::vector<NetEdge> edges;
  std::vector<std::array<int, 3>> faces;
  std::array<std::vector<int>, kClawCount> rim_groups;
  std::vector<int> apex_nodes;

  std::size_t node_count() const { return rest_positions.size(); }
  /// ring 0 is the hub ring, ring `rings` is the rim.
  int node(int ring, int segment) const;
};

NetMesh build_net(const NetBuildParams& params);

struct ElasticEvaluation
{
  double energy = 0.0;         // N mm
  std::vector<Vec3> gradient;  // N, zero for fixed nodes
};

/// Sum of 1/2 k (|xa - xb| - rest)^2 over belts. With tension_only a belt
/// contributes only while longer than its rest length.
ElasticEvaluation elastic_energy(const NetMesh& mesh, std::span<const Vec3> positions,
                                 bool tension_only = false);

/// Per-belt tension, N (negative in compression unless tension_only).
std::vector<double> edge_tensions(const NetMesh& mesh, std::span<const Vec3> positions,
                                  bool tension_only = false);

enum class SolverMethod
{
  Lbfgs,
  GradientDescent
};

struct SolverParams
{
  double tolerance = 1e-6;  // N, gradient infinity-norm
  int max_iterations = 20000;
  SolverMethod method = SolverMethod::Lbfgs;
  int memory = 8;
  bool tension_only = false;
};

void validate(const SolverParams& params);

/// How the object takes part in the minimisation.
struct ObjectCoupling
{
  enum class Mode
  {
    Kinematic,  // pose prescribed
    Free        // translation along free_axes is a solver unknown, with gravity
  };
  Mode mode = Mode::Kinematic;
  std::array<bool, 3> free_axes{false, false, true};
  /// One-sided presenter support: the object may be lifted off its presented
  /// height but sinks below it only against k_support.
  bool support = true;
  double k_support = 50.0;  // N/mm
  /// Abort if the object drifts further than this from its presented pose.
  double max_travel = 500.0;  // mm
};

struct ObjectLoad
{
  RigidObject object;
  ContactParams contact;
  ObjectCoupling coupling;
};

struct EquilibriumResult
{
  std::vector<Vec3> positions;
  bool converged = false;
  double residual_norm = 0.0;  // N, gradient infinity-norm over the unknowns
  int iterations = 0;
  double energy = 0.0;
  Vec3 object_offset = Vec3::Zero();
  std::vector<Vec3> contact_forces;     // N, object on node (normal + tangential)
  std::vector<Vec3> normal_forces;      // N
  std::vector<Vec3> tangential_forces;  // N, clamped to the current Coulomb cone
  std::vector<Vec3> contact_normals;    // unit, zero where not in contact
  std::vector<Vec3> node_stress;        // N/mm^2, normal stress xx, yy, zz
  double support_force = 0.0;           // N, presenter reaction on the object
};

/// Minimises belt energy, object gravity potential, the presenter support and
/// the contact (penalty plus friction) potential with the rim nodes bound to
/// `rim_targets`. `warm_start` (full node positions) seeds the free nodes;
/// `warm_offset` seeds the object translation.
///
/// Throws ConvergenceError (with the residual history) when the iteration cap
/// is hit and SingularConfiguration on a zero-length belt.
EquilibriumResult solve_equilibrium(const NetMesh& mesh, const std::array<Vec3, kClawCount>& rim_targets,
                                    const ObjectLoad* load, const SolverParams& params,
                                    const std::vector<Vec3>* warm_start = nullptr,
                                    const FrictionState* friction = nullptr,
                                    const Vec3& warm_offset = Vec3::Zero());

/// Lumped nodal stress: diag( sum_e T_e d_e d_e^T ) / belt_area over the belts
/// incident to each node, i.e. the x, y and z normal-stress components.
std::vector<Vec3> node_stress(const NetMesh& mesh, const EquilibriumResult& result,
                              bool tension_only = false);

double max_stress_magnitude(const std::vector<Vec3>& stress);

/// Sum of contact normal force magnitudes, N.
double total_normal_force(const EquilibriumResult& result);

}  // namespace netgrip
