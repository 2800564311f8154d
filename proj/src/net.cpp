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

#include "netgrip/net.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace netgrip
{

int NetMesh::node(int ring, int segment) const
{
  const int j = ((segment % segments) + segments) % segments;
  return 1 + ring * segments + j;
}

NetMesh build_net(const NetBuildParams& p)
{
  if (p.rings < 2)
    throw ConstructionError("net needs at least 2 rings");
  if (p.segments < kClawCount || p.segments % kClawCount != 0)
    throw ConstructionError("segments must be a positive multiple of 8");
  if (!(p.top_radius > 0.0) || !(p.bottom_radius > 0.0))
    throw ConstructionError("cone radii must be positive");
  if (!(p.depth >= 0.0))
    throw ConstructionError("cone depth must be non-negative");
  if (!(p.stiffness > 0.0) || !(p.belt_area > 0.0))
    throw ConstructionError("belt stiffness and area must be positive");

  NetMesh mesh;
  mesh.rings = p.rings;
  mesh.segments = p.segments;
  mesh.belt_area = p.belt_area;

  const int s = p.segments;
  const int node_count = 1 + s * (p.rings + 1);
  mesh.rest_positions.reserve(node_count);
  mesh.rest_positions.emplace_back(0.0, 0.0, 0.0);
  for (int ring = 0; ring <= p.rings; ++ring)
  {
    const double t = static_cast<double>(ring) / p.rings;
    const double radius = p.top_radius + (p.bottom_radius - p.top_radius) * t;
    const double z = -p.depth * t;
    for (int j = 0; j < s; ++j)
    {
      const double phi = 2.0 * std::numbers::pi * j / s;
      mesh.rest_positions.emplace_back(radius * std::cos(phi), radius * std::sin(phi), z);
    }
  }

  mesh.fixed.assign(node_count, 0);
  mesh.apex_nodes.push_back(0);
  for (int j = 0; j < s; ++j)
    mesh.apex_nodes.push_back(mesh.node(0, j));
  for (const int i : mesh.apex_nodes)
    mesh.fixed[i] = 1;

  const int per_claw = s / kClawCount;
  for (int k = 0; k < kClawCount; ++k)
  {
    const int i = mesh.node(p.rings, k * per_claw);
    mesh.rim_groups[k].push_back(i);
    mesh.fixed[i] = 1;
  }

  auto addEdge = [&](int a, int b) {
    const double rest = (mesh.rest_positions[a] - mesh.rest_positions[b]).norm();
    if (!(rest > 1e-9))
      throw ConstructionError("degenerate cone: coincident nodes " + std::to_string(a) + " and " +
                              std::to_string(b));
    mesh.edges.push_back({a, b, rest, p.stiffness});
  };

  for (int j = 0; j < s; ++j)
  {
    addEdge(0, mesh.node(0, j));
    addEdge(mesh.node(0, j), mesh.node(0, j + 1));
    mesh.faces.push_back({0, mesh.node(0, j), mesh.node(0, j + 1)});
  }
  for (int ring = 1; ring <= p.rings; ++ring)
  {
    for (int j = 0; j < s; ++j)
    {
      const int a = mesh.node(ring - 1, j);
      const int b = mesh.node(ring - 1, j + 1);
      const int c = mesh.node(ring, j);
      const int d = mesh.node(ring, j + 1);
      addEdge(c, d);
      addEdge(a, c);
      addEdge(b, c);
      mesh.faces.push_back({a, c, b});
      mesh.faces.push_back({b, c, d});
    }
  }
  return mesh;
}

ElasticEvaluation elastic_energy(const NetMesh& mesh, std::span<const Vec3> positions,
                                 bool tension_only)
{
  if (positions.size() != mesh.node_count())
    throw PreconditionError("position count does not match the mesh");

  ElasticEvaluation out;
  out.gradient.assign(positions.size(), Vec3::Zero());
  for (const NetEdge& e : mesh.edges)
  {
    const Vec3 d = positions[e.b] - positions[e.a];
    const double length = d.norm();
    if (length == 0.0)
      throw SingularConfiguration("belt " + std::to_string(e.a) + "-" + std::to_string(e.b) +
                                  " has zero length");
    const double stretch = length - e.rest_length;
    if (tension_only && stretch <= 0.0)
      continue;
    out.energy += 0.5 * e.stiffness * stretch * stretch;
    const Vec3 g = (e.stiffness * stretch / length) * d;
    out.gradient[e.a] -= g;
    out.gradient[e.b] += g;
  }
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (mesh.fixed[i])
      out.gradient[i].setZero();
  return out;
}

std::vector<double> edge_tensions(const NetMesh& mesh, std::span<const Vec3> positions,
                                  bool tension_only)
{
  std::vector<double> tension;
  tension.reserve(mesh.edges.size());
  for (const NetEdge& e : mesh.edges)
  {
    const double stretch = (positions[e.b] - positions[e.a]).norm() - e.rest_length;
    tension.push_back(tension_only && stretch <= 0.0 ? 0.0 : e.stiffness * stretch);
  }
  return tension;
}

std::vector<Vec3> node_stress(const NetMesh& mesh, const EquilibriumResult& result,
                              bool tension_only)
{
  std::vector<Vec3> stress(mesh.node_count(), Vec3::Zero());
  const auto tension = edge_tensions(mesh, result.positions, tension_only);
  for (std::size_t k = 0; k < mesh.edges.size(); ++k)
  {
    const NetEdge& e = mesh.edges[k];
    const Vec3 d = result.positions[e.b] - result.positions[e.a];
    const double length = d.norm();
    if (length == 0.0 || tension[k] == 0.0)
      continue;
    const Vec3 dir = d / length;
    const Vec3 contribution = (tension[k] / mesh.belt_area) * dir.cwiseProduct(dir);
    stress[e.a] += contribution;
    stress[e.b] += contribution;
  }
  return stress;
}

double max_stress_magnitude(const std::vector<Vec3>& stress)
{
  double best = 0.0;
  for (const Vec3& s : stress)
    best = std::max(best, s.norm());
  return best;
}

double total_normal_force(const EquilibriumResult& result)
{
  double total = 0.0;
  for (const Vec3& f : result.normal_forces)
    total += f.norm();
  return total;
}

}  // namespace netgrip
