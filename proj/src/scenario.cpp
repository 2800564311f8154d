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

#include "netgrip/scenario.hpp"

#include "json_detail.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace netgrip
{

namespace
{

using nlohmann::json;

constexpr int kSchemaVersion = 1;
constexpr double kDegrees = 3.14159265358979323846 / 180.0;

/// Typed access to a JSON object that reports errors by dotted path.
class Node
{
public:
  Node(const json& value, std::string path)
    : value_(value), path_(std::move(path))
  {
  }

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  std::string child_path(std::string_view key) const
  {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  void require_object() const
  {
    if (!value_.is_object())
      throw SchemaError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const
  {
    require_object();
    for (const auto& item : value_.items())
    {
      bool known = false;
      for (const auto key : keys)
        known = known || item.key() == key;
      if (!known)
        throw SchemaError(child_path(item.key()), "unknown field");
    }
  }

  bool has(std::string_view key) const { return value_.contains(std::string(key)); }

  Node at(std::string_view key) const
  {
    if (!has(key))
      throw SchemaError(child_path(key), "missing required field");
    return Node(value_.at(std::string(key)), child_path(key));
  }

  double number(std::string_view key, std::optional<double> fallback = std::nullopt) const
  {
    if (!has(key))
    {
      if (fallback)
        return *fallback;
      throw SchemaError(child_path(key), "missing required field");
    }
    const json& v = value_.at(std::string(key));
    if (!v.is_number())
      throw SchemaError(child_path(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
      throw SchemaError(child_path(key), "must be finite");
    return x;
  }

  std::optional<double> maybe_number(std::string_view key) const
  {
    if (!has(key) || value_.at(std::string(key)).is_null())
      return std::nullopt;
    return number(key);
  }

  int integer(std::string_view key, int fallback) const
  {
    if (!has(key))
      return fallback;
    const json& v = value_.at(std::string(key));
    if (!v.is_number_integer())
      throw SchemaError(child_path(key), "expected an integer");
    return v.get<int>();
  }

  bool boolean(std::string_view key, bool fallback) const
  {
    if (!has(key))
      return fallback;
    const json& v = value_.at(std::string(key));
    if (!v.is_boolean())
      throw SchemaError(child_path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(std::string_view key, std::optional<std::string> fallback = std::nullopt) const
  {
    if (!has(key))
    {
      if (fallback)
        return *fallback;
      throw SchemaError(child_path(key), "missing required field");
    }
    const json& v = value_.at(std::string(key));
    if (!v.is_string())
      throw SchemaError(child_path(key), "expected a string");
    return v.get<std::string>();
  }

  Vec3 vec3(std::string_view key, const Vec3& fallback) const
  {
    if (!has(key))
      return fallback;
    const json& v = value_.at(std::string(key));
    if (!v.is_array() || v.size() != 3)
      throw SchemaError(child_path(key), "expected [x, y, z]");
    Vec3 out;
    for (int i = 0; i < 3; ++i)
    {
      if (!v[i].is_number())
        throw SchemaError(child_path(key) + "[" + std::to_string(i) + "]", "expected a number");
      out[i] = v[i].get<double>();
    }
    return out;
  }

private:
  const json& value_;
  std::string path_;
};

template <typename Fn>
void rethrow_as_schema(const std::string& field, Fn&& fn)
{
  try
  {
    fn();
  }
  catch (const SchemaError&)
  {
    throw;
  }
  catch (const Error& e)
  {
    throw SchemaError(field, e.what());
  }
}

LinkageConfig read_linkage(const Node& node)
{
  node.allow_only({"aperture_closed", "aperture_open", "travel_max", "claw_length", "rod_length", "pivot_radius",
                   "rod_attach", "slider_offset"});
  const LinkageConfig defaults;
  const double closed = node.number("aperture_closed", defaults.aperture_closed);
  const double open = node.number("aperture_open", defaults.aperture_open);
  const double travel = node.number("travel_max", defaults.travel_max);
  if (!node.has("claw_length"))
  {
    LinkageConfig fitted;
    rethrow_as_schema(node.path(), [&] { fitted = fit_linkage(closed, open, travel); });
    return fitted;
  }
  LinkageConfig config;
  config.aperture_closed = closed;
  config.aperture_open = open;
  config.travel_max = travel;
  config.claw_length = node.number("claw_length");
  config.rod_length = node.number("rod_length");
  config.pivot_radius = node.number("pivot_radius");
  config.rod_attach = node.number("rod_attach");
  config.slider_offset = node.number("slider_offset");
  return config;
}

NetBuildParams read_net(const Node& node, const LinkageConfig& linkage)
{
  node.allow_only({"rings", "segments", "top_radius", "bottom_radius", "depth", "stiffness", "belt_area"});
  NetBuildParams p;
  p.rings = node.integer("rings", p.rings);
  p.segments = node.integer("segments", p.segments);
  p.top_radius = node.number("top_radius", p.top_radius);
  // The relaxed belt spans the closed claw tips.
  double rim_radius = 0.5 * linkage.aperture_closed;
  double rim_depth = p.depth;
  rethrow_as_schema("linkage", [&] { rim_depth = -claw_tips(linkage, 0.0)[0].z(); });
  p.bottom_radius = node.number("bottom_radius", rim_radius);
  p.depth = node.number("depth", rim_depth);
  p.stiffness = node.number("stiffness", p.stiffness);
  p.belt_area = node.number("belt_area", p.belt_area);
  return p;
}

Shape read_shape(const Node& node)
{
  node.require_object();
  const std::string type = node.string("type");
  if (type == "sphere")
  {
    node.allow_only({"type", "radius"});
    return Sphere{node.number("radius")};
  }
  if (type == "capsule")
  {
    node.allow_only({"type", "radius", "length"});
    return Capsule{node.number("radius"), node.number("length")};
  }
  if (type == "box")
  {
    node.allow_only({"type", "a", "b", "c"});
    return Box{node.number("a"), node.number("b"), node.number("c")};
  }
  if (type == "ellipsoid")
  {
    node.allow_only({"type", "a", "b", "c"});
    return Ellipsoid{node.number("a"), node.number("b"), node.number("c")};
  }
  if (type == "frustum")
  {
    node.allow_only({"type", "r_top", "r_bottom", "height"});
    return Frustum{node.number("r_top"), node.number("r_bottom"), node.number("height")};
  }
  throw SchemaError(node.child_path("type"), "unknown shape '" + type + "'");
}

Pose read_pose(const Node& node)
{
  node.allow_only({"position", "axis", "angle_deg", "orientation"});
  Pose pose;
  pose.position = node.vec3("position", Vec3::Zero());
  if (node.has("orientation"))
  {
    if (node.has("axis") || node.has("angle_deg"))
      throw SchemaError(node.child_path("orientation"), "give either orientation or axis/angle_deg");
    const json& q = node.raw().at("orientation");
    if (!q.is_array() || q.size() != 4)
      throw SchemaError(node.child_path("orientation"), "expected [w, x, y, z]");
    for (const auto& c : q)
      if (!c.is_number())
        throw SchemaError(node.child_path("orientation"), "expected numbers");
    pose.orientation = Eigen::Quaterniond(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                                          q[3].get<double>());
    if (std::abs(pose.orientation.norm() - 1.0) > 1e-9)
      throw SchemaError(node.child_path("orientation"), "quaternion must be unit length");
    return pose;
  }
  const Vec3 axis = node.vec3("axis", Vec3::UnitZ());
  if (!(axis.norm() > 0.0))
    throw SchemaError(node.child_path("axis"), "axis must be non-zero");
  const double angle = node.number("angle_deg", 0.0) * kDegrees;
  pose.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis.normalized()));
  return pose;
}

RigidObject read_object(const Node& node, const ContactParams& contact)
{
  node.allow_only({"shape", "pose", "mass", "mu"});
  RigidObject object;
  object.shape = read_shape(node.at("shape"));
  if (node.has("pose"))
    object.pose = read_pose(node.at("pose"));
  object.mass = node.number("mass", 0.0);
  object.mu = node.number("mu", contact.mu_default);
  return object;
}

ObjectCoupling read_coupling(const Node& node)
{
  node.allow_only({"mode", "free_axes", "support", "k_support", "max_travel"});
  ObjectCoupling c;
  const std::string mode = node.string("mode", "kinematic");
  if (mode == "kinematic")
    c.mode = ObjectCoupling::Mode::Kinematic;
  else if (mode == "free")
    c.mode = ObjectCoupling::Mode::Free;
  else
    throw SchemaError(node.child_path("mode"), "expected kinematic or free");
  if (node.has("free_axes"))
  {
    const json& axes = node.raw().at("free_axes");
    if (!axes.is_array() || axes.size() != 3)
      throw SchemaError(node.child_path("free_axes"), "expected [bool, bool, bool]");
    for (int i = 0; i < 3; ++i)
    {
      if (!axes[i].is_boolean())
        throw SchemaError(node.child_path("free_axes"), "expected booleans");
      c.free_axes[i] = axes[i].get<bool>();
    }
  }
  c.support = node.boolean("support", c.support);
  c.k_support = node.number("k_support", c.k_support);
  c.max_travel = node.number("max_travel", c.max_travel);
  return c;
}

SensorModel read_sensor_model(const Node& node)
{
  node.allow_only({"r0", "r_sat", "f_c", "f_sat", "r_ref", "v_supply"});
  SensorModel m;
  m.r0 = node.number("r0", m.r0);
  m.r_sat = node.number("r_sat", m.r_sat);
  m.f_c = node.number("f_c", m.f_c);
  m.f_sat = node.number("f_sat", m.f_sat);
  m.r_ref = node.number("r_ref", m.r_ref);
  m.v_supply = node.number("v_supply", m.v_supply);
  return m;
}

ControlPolicy read_control(const Node& node)
{
  node.require_object();
  const std::string type = node.string("type");
  if (type == "threshold")
  {
    node.allow_only({"type", "approach_s", "close_speed", "stop_volts", "stop_newtons", "hold_s", "reopen_speed",
                     "settle_s"});
    ThresholdPolicy p;
    p.approach_s = node.number("approach_s", p.approach_s);
    p.close_speed = node.number("close_speed", p.close_speed);
    p.stop_volts = node.maybe_number("stop_volts");
    p.stop_newtons = node.maybe_number("stop_newtons");
    p.hold_s = node.number("hold_s", p.hold_s);
    p.reopen_speed = node.number("reopen_speed", p.reopen_speed);
    p.settle_s = node.number("settle_s", p.settle_s);
    return p;
  }
  if (type == "script")
  {
    node.allow_only({"type", "waypoints"});
    const Node points = node.at("waypoints");
    if (!points.raw().is_array())
      throw SchemaError(points.path(), "expected [[t, s], ...]");
    ScriptPolicy p;
    for (std::size_t i = 0; i < points.raw().size(); ++i)
    {
      const json& w = points.raw()[i];
      const std::string where = points.path() + "[" + std::to_string(i) + "]";
      if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
        throw SchemaError(where, "expected [t, s]");
      p.waypoints.push_back({w[0].get<double>(), w[1].get<double>()});
    }
    return p;
  }
  throw SchemaError(node.child_path("type"), "expected threshold or script");
}

SolverParams read_solver(const Node& node)
{
  node.allow_only({"tolerance", "max_iterations", "method", "memory", "tension_only"});
  SolverParams p;
  p.tolerance = node.number("tolerance", p.tolerance);
  p.max_iterations = node.integer("max_iterations", p.max_iterations);
  const std::string method = node.string("method", "lbfgs");
  if (method == "lbfgs")
    p.method = SolverMethod::Lbfgs;
  else if (method == "gradient_descent")
    p.method = SolverMethod::GradientDescent;
  else
    throw SchemaError(node.child_path("method"), "expected lbfgs or gradient_descent");
  p.memory = node.integer("memory", p.memory);
  p.tension_only = node.boolean("tension_only", p.tension_only);
  return p;
}

ContactParams read_contact(const Node& node)
{
  node.allow_only({"k_contact", "k_tangential", "mu_default", "gravity"});
  ContactParams p;
  p.k_contact = node.number("k_contact", p.k_contact);
  p.k_tangential = node.number("k_tangential", p.k_tangential);
  p.mu_default = node.number("mu_default", p.mu_default);
  p.gravity = node.number("gravity", p.gravity);
  return p;
}

SegmenterConfig read_segmenter(const Node& node)
{
  node.allow_only({"window", "eps_base", "slope_min", "dwell_min"});
  SegmenterConfig c;
  c.window = node.integer("window", c.window);
  c.eps_base = node.number("eps_base", c.eps_base);
  c.slope_min = node.number("slope_min", c.slope_min);
  c.dwell_min = node.number("dwell_min", c.dwell_min);
  return c;
}

json shape_json_impl(const Shape& shape)
{
  return std::visit(
    [](const auto& s) -> json {
      using T = std::decay_t<decltype(s)>;
      if constexpr (std::is_same_v<T, Sphere>)
        return {{"type", "sphere"}, {"radius", s.radius}};
      else if constexpr (std::is_same_v<T, Capsule>)
        return {{"type", "capsule"}, {"radius", s.radius}, {"length", s.length}};
      else if constexpr (std::is_same_v<T, Box>)
        return {{"type", "box"}, {"a", s.a}, {"b", s.b}, {"c", s.c}};
      else if constexpr (std::is_same_v<T, Ellipsoid>)
        return {{"type", "ellipsoid"}, {"a", s.a}, {"b", s.b}, {"c", s.c}};
      else
        return {{"type", "frustum"}, {"r_top", s.r_top}, {"r_bottom", s.r_bottom}, {"height", s.height}};
    },
    shape);
}

json vec_json(const Vec3& v)
{
  return json::array({v.x(), v.y(), v.z()});
}

void check_positive(double value, const std::string& field)
{
  if (!(value > 0.0))
    throw SchemaError(field, "must be positive");
}

}  // namespace

namespace detail
{

nlohmann::json shape_to_json(const Shape& shape)
{
  return shape_json_impl(shape);
}

Shape shape_from_json(const nlohmann::json& value, const std::string& path)
{
  return read_shape(Node(value, path));
}

}  // namespace detail

void validate(const Scenario& sc)
{
  rethrow_as_schema("linkage", [&] { validate(sc.linkage); });
  NetMesh mesh;
  rethrow_as_schema("net", [&] { mesh = build_net(sc.net); });
  if (sc.object)
    rethrow_as_schema("object", [&] { validate(*sc.object); });
  if (!(sc.coupling.k_support > 0.0))
    throw SchemaError("coupling.k_support", "must be positive");
  if (!(sc.coupling.max_travel > 0.0))
    throw SchemaError("coupling.max_travel", "must be positive");
  rethrow_as_schema("sensors.model", [&] { validate(sc.sensor_model); });
  rethrow_as_schema("sensors", [&] { place_sensors(mesh, sc.placement, sc.sensor_model); });
  rethrow_as_schema("solver", [&] { validate(sc.solver); });
  rethrow_as_schema("contact", [&] { validate(sc.contact); });
  rethrow_as_schema("segmenter", [&] { validate(sc.segmenter); });
  check_positive(sc.sample_rate, "sample_rate");
  check_positive(sc.jog_speed, "jog_speed");
  if (!(sc.noise_sigma >= 0.0))
    throw SchemaError("noise_sigma", "must be non-negative");

  const double travel = sc.linkage.travel_max;
  if (const auto* p = std::get_if<ThresholdPolicy>(&sc.control))
  {
    check_positive(p->close_speed, "control.close_speed");
    check_positive(p->reopen_speed, "control.reopen_speed");
    if (!(p->approach_s >= 0.0))
      throw SchemaError("control.approach_s", "must be non-negative");
    if (!(p->hold_s >= 0.0))
      throw SchemaError("control.hold_s", "must be non-negative");
    if (!(p->settle_s >= 0.0))
      throw SchemaError("control.settle_s", "must be non-negative");
    if (p->stop_volts.has_value() == p->stop_newtons.has_value())
      throw SchemaError("control.stop_volts", "give exactly one of stop_volts or stop_newtons");
    if (p->stop_volts && !(*p->stop_volts > 0.0 && *p->stop_volts < sc.sensor_model.v_supply))
      throw SchemaError("control.stop_volts", "must lie in (0, V_supply)");
    if (p->stop_newtons && !(*p->stop_newtons > 0.0))
      throw SchemaError("control.stop_newtons", "must be positive");
  }
  else
  {
    const auto& points = std::get<ScriptPolicy>(sc.control).waypoints;
    if (points.empty())
      throw SchemaError("control.waypoints", "needs at least one waypoint");
    for (std::size_t i = 0; i < points.size(); ++i)
    {
      const std::string where = "control.waypoints[" + std::to_string(i) + "]";
      if (!(points[i][1] >= 0.0 && points[i][1] <= travel))
        throw SchemaError(where, "slider target " + std::to_string(points[i][1]) + " mm outside [0, " +
                                   std::to_string(travel) + "]");
      if (!(points[i][0] >= 0.0) || (i > 0 && !(points[i][0] > points[i - 1][0])))
        throw SchemaError(where, "waypoint times must be non-negative and increasing");
    }
  }
}

Scenario scenario_from_json(std::string_view text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::parse_error& e)
  {
    throw FormatError(std::string("scenario JSON: ") + e.what());
  }
  const Node root(doc, "");
  root.allow_only({"schema", "name", "linkage", "net", "object", "coupling", "sensors", "control", "jog_speed",
                   "solver", "contact", "segmenter", "sample_rate", "seed", "noise_sigma"});
  if (!root.has("schema") || !doc.at("schema").is_number_integer() || doc.at("schema").get<int>() != kSchemaVersion)
    throw SchemaError("schema", "expected 1");

  Scenario sc;
  sc.name = root.string("name", "");
  const json empty = json::object();
  auto section = [&](std::string_view key) { return root.has(key) ? root.at(key) : Node(empty, std::string(key)); };

  sc.linkage = read_linkage(section("linkage"));
  sc.net = read_net(section("net"), sc.linkage);
  sc.contact = read_contact(section("contact"));
  if (root.has("object") && !doc.at("object").is_null())
    sc.object = read_object(root.at("object"), sc.contact);
  sc.coupling = read_coupling(section("coupling"));

  const Node sensors = section("sensors");
  sensors.allow_only({"ring_lo", "ring_hi", "half_width", "angle_offset_deg", "model"});
  sc.placement.ring_lo = sensors.integer("ring_lo", sc.placement.ring_lo);
  sc.placement.ring_hi = sensors.integer("ring_hi", sc.placement.ring_hi);
  sc.placement.half_width = sensors.integer("half_width", sc.placement.half_width);
  sc.placement.angle_offset_deg = sensors.number("angle_offset_deg", sc.placement.angle_offset_deg);
  if (sensors.has("model"))
    sc.sensor_model = read_sensor_model(sensors.at("model"));

  if (root.has("control"))
    sc.control = read_control(root.at("control"));
  else
    throw SchemaError("control", "missing required field");
  sc.jog_speed = root.number("jog_speed", sc.jog_speed);
  sc.solver = read_solver(section("solver"));
  sc.segmenter = read_segmenter(section("segmenter"));
  sc.sample_rate = root.number("sample_rate", sc.sample_rate);
  if (root.has("seed"))
  {
    if (!doc.at("seed").is_number_unsigned())
      throw SchemaError("seed", "expected a non-negative integer");
    sc.seed = doc.at("seed").get<std::uint64_t>();
  }
  sc.noise_sigma = root.number("noise_sigma", sc.noise_sigma);

  validate(sc);
  return sc;
}

std::string scenario_to_json(const Scenario& sc, int indent)
{
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["name"] = sc.name;
  const auto& l = sc.linkage;
  doc["linkage"] = {{"aperture_closed", l.aperture_closed}, {"aperture_open", l.aperture_open},
                    {"travel_max", l.travel_max},           {"claw_length", l.claw_length},
                    {"rod_length", l.rod_length},           {"pivot_radius", l.pivot_radius},
                    {"rod_attach", l.rod_attach},           {"slider_offset", l.slider_offset}};
  const auto& n = sc.net;
  doc["net"] = {{"rings", n.rings},
                {"segments", n.segments},
                {"top_radius", n.top_radius},
                {"bottom_radius", n.bottom_radius},
                {"depth", n.depth},
                {"stiffness", n.stiffness},
                {"belt_area", n.belt_area}};
  if (sc.object)
  {
    const auto& o = *sc.object;
    const auto& q = o.pose.orientation;
    doc["object"] = {{"shape", detail::shape_to_json(o.shape)},
                     {"pose", {{"position", vec_json(o.pose.position)}, {"orientation", {q.w(), q.x(), q.y(), q.z()}}}},
                     {"mass", o.mass},
                     {"mu", o.mu}};
  }
  else
    doc["object"] = nullptr;
  const auto& c = sc.coupling;
  doc["coupling"] = {{"mode", c.mode == ObjectCoupling::Mode::Free ? "free" : "kinematic"},
                     {"free_axes", {c.free_axes[0], c.free_axes[1], c.free_axes[2]}},
                     {"support", c.support},
                     {"k_support", c.k_support},
                     {"max_travel", c.max_travel}};
  const auto& m = sc.sensor_model;
  doc["sensors"] = {{"ring_lo", sc.placement.ring_lo},
                    {"ring_hi", sc.placement.ring_hi},
                    {"half_width", sc.placement.half_width},
                    {"angle_offset_deg", sc.placement.angle_offset_deg},
                    {"model",
                     {{"r0", m.r0},
                      {"r_sat", m.r_sat},
                      {"f_c", m.f_c},
                      {"f_sat", m.f_sat},
                      {"r_ref", m.r_ref},
                      {"v_supply", m.v_supply}}}};
  if (const auto* p = std::get_if<ThresholdPolicy>(&sc.control))
  {
    doc["control"] = {{"type", "threshold"},       {"approach_s", p->approach_s},
                      {"close_speed", p->close_speed}, {"hold_s", p->hold_s},
                      {"reopen_speed", p->reopen_speed}, {"settle_s", p->settle_s}};
    if (p->stop_volts)
      doc["control"]["stop_volts"] = *p->stop_volts;
    if (p->stop_newtons)
      doc["control"]["stop_newtons"] = *p->stop_newtons;
  }
  else
  {
    json points = json::array();
    for (const auto& w : std::get<ScriptPolicy>(sc.control).waypoints)
      points.push_back({w[0], w[1]});
    doc["control"] = {{"type", "script"}, {"waypoints", points}};
  }
  doc["jog_speed"] = sc.jog_speed;
  doc["solver"] = {{"tolerance", sc.solver.tolerance},
                   {"max_iterations", sc.solver.max_iterations},
                   {"method", sc.solver.method == SolverMethod::Lbfgs ? "lbfgs" : "gradient_descent"},
                   {"memory", sc.solver.memory},
                   {"tension_only", sc.solver.tension_only}};
  doc["contact"] = {{"k_contact", sc.contact.k_contact},
                    {"k_tangential", sc.contact.k_tangential},
                    {"mu_default", sc.contact.mu_default},
                    {"gravity", sc.contact.gravity}};
  doc["segmenter"] = {{"window", sc.segmenter.window},
                      {"eps_base", sc.segmenter.eps_base},
                      {"slope_min", sc.segmenter.slope_min},
                      {"dwell_min", sc.segmenter.dwell_min}};
  doc["sample_rate"] = sc.sample_rate;
  doc["seed"] = sc.seed;
  doc["noise_sigma"] = sc.noise_sigma;
  return doc.dump(indent);
}

Scenario load_scenario(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw FormatError("cannot read scenario file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return scenario_from_json(text.str());
}

double policy_duration(const Scenario& sc)
{
  if (const auto* p = std::get_if<ThresholdPolicy>(&sc.control))
    return p->approach_s + sc.linkage.travel_max / p->close_speed + p->hold_s +
           sc.linkage.travel_max / p->reopen_speed + p->settle_s;
  return std::get<ScriptPolicy>(sc.control).waypoints.back()[0];
}

}  // namespace netgrip
