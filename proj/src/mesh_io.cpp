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

#include "netgrip/mesh_io.hpp"

#include "json_detail.hpp"

namespace netgrip
{

namespace
{

using nlohmann::json;

json points_json(const std::vector<Vec3>& points)
{
  json out = json::array();
  for (const auto& p : points)
    out.push_back({p.x(), p.y(), p.z()});
  return out;
}

std::vector<Vec3> points_from(const json& value)
{
  std::vector<Vec3> out;
  for (const auto& p : value)
  {
    if (!p.is_array() || p.size() != 3)
      throw FormatError("mesh frame: expected [x, y, z]");
    out.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
  }
  return out;
}

bool same_object(const RigidObject& a, const RigidObject& b)
{
  return shape_name(a.shape) == shape_name(b.shape) &&
         detail::shape_to_json(a.shape) == detail::shape_to_json(b.shape) && a.pose.position == b.pose.position &&
         a.pose.orientation.coeffs() == b.pose.orientation.coeffs() && a.mass == b.mass && a.mu == b.mu;
}

}  // namespace

bool MeshFrame::operator==(const MeshFrame& o) const
{
  if (object.has_value() != o.object.has_value())
    return false;
  if (object && !same_object(*object, *o.object))
    return false;
  return t == o.t && slider == o.slider && aperture == o.aperture && nodes == o.nodes && fixed == o.fixed &&
         edges == o.edges && tensions == o.tensions && faces == o.faces && contact_forces == o.contact_forces;
}

MeshFrame make_mesh_frame(const NetMesh& mesh, const EquilibriumResult& state, double t, double slider,
                          double aperture, const std::optional<RigidObject>& object, bool tension_only)
{
  MeshFrame frame;
  frame.t = t;
  frame.slider = slider;
  frame.aperture = aperture;
  frame.nodes = state.positions;
  frame.fixed = mesh.fixed;
  for (const auto& e : mesh.edges)
    frame.edges.push_back({e.a, e.b});
  frame.tensions = edge_tensions(mesh, state.positions, tension_only);
  frame.faces = mesh.faces;
  frame.contact_forces = state.contact_forces;
  if (frame.contact_forces.empty())
    frame.contact_forces.assign(frame.nodes.size(), Vec3::Zero());
  if (object)
  {
    frame.object = *object;
    frame.object->pose.position += state.object_offset;
  }
  return frame;
}

std::string mesh_frame_to_json(const MeshFrame& frame, int indent)
{
  json edges = json::array();
  for (const auto& e : frame.edges)
    edges.push_back({e[0], e[1]});
  json faces = json::array();
  for (const auto& f : frame.faces)
    faces.push_back({f[0], f[1], f[2]});
  json fixed = json::array();
  for (const auto f : frame.fixed)
    fixed.push_back(f != 0);
  json doc{{"schema", 1},
           {"t", frame.t},
           {"slider", frame.slider},
           {"aperture", frame.aperture},
           {"nodes", points_json(frame.nodes)},
           {"fixed", fixed},
           {"edges", edges},
           {"tensions", frame.tensions},
           {"faces", faces},
           {"contact_forces", points_json(frame.contact_forces)}};
  if (frame.object)
  {
    const auto& o = *frame.object;
    const auto& q = o.pose.orientation;
    doc["object"] = {{"shape", detail::shape_to_json(o.shape)},
                     {"position", {o.pose.position.x(), o.pose.position.y(), o.pose.position.z()}},
                     {"orientation", {q.w(), q.x(), q.y(), q.z()}},
                     {"mass", o.mass},
                     {"mu", o.mu}};
  }
  else
    doc["object"] = nullptr;
  return doc.dump(indent);
}

MeshFrame mesh_frame_from_json(std::string_view text)
{
  try
  {
    const json doc = json::parse(text);
    if (doc.at("schema").get<int>() != 1)
      throw FormatError("mesh frame: unsupported schema");
    MeshFrame frame;
    frame.t = doc.at("t").get<double>();
    frame.slider = doc.at("slider").get<double>();
    frame.aperture = doc.at("aperture").get<double>();
    frame.nodes = points_from(doc.at("nodes"));
    for (const auto& f : doc.at("fixed"))
      frame.fixed.push_back(f.get<bool>() ? 1 : 0);
    for (const auto& e : doc.at("edges"))
      frame.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    frame.tensions = doc.at("tensions").get<std::vector<double>>();
    for (const auto& f : doc.at("faces"))
      frame.faces.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()});
    frame.contact_forces = points_from(doc.at("contact_forces"));
    if (!doc.at("object").is_null())
    {
      const auto& o = doc.at("object");
      RigidObject object;
      object.shape = detail::shape_from_json(o.at("shape"), "object.shape");
      const auto p = o.at("position");
      object.pose.position = Vec3(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
      const auto q = o.at("orientation");
      object.pose.orientation =
        Eigen::Quaterniond(q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>(), q.at(3).get<double>());
      object.mass = o.at("mass").get<double>();
      object.mu = o.at("mu").get<double>();
      frame.object = object;
    }
    const std::size_t n = frame.nodes.size();
    if (frame.fixed.size() != n || frame.contact_forces.size() != n || frame.tensions.size() != frame.edges.size())
      throw FormatError("mesh frame: inconsistent array lengths");
    return frame;
  }
  catch (const json::exception& e)
  {
    throw FormatError(std::string("mesh frame: ") + e.what());
  }
  catch (const SchemaError& e)
  {
    throw FormatError(std::string("mesh frame: ") + e.what());
  }
}

}  // namespace netgrip
