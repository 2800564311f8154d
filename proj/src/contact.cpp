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

#include "netgrip/contact.hpp"

#include "netgrip/net.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace netgrip
{
namespace
{

struct LocalSdf
{
  double distance;
  Vec3 normal;
};

template <class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double signOf(double v) { return v < 0.0 ? -1.0 : 1.0; }

Vec3 unitOr(const Vec3& v, const Vec3& fallback)
{
  const double n = v.norm();
  return n > 0.0 ? Vec3(v / n) : fallback;
}

LocalSdf sphereSdf(const Sphere& s, const Vec3& p)
{
  return {p.norm() - s.radius, unitOr(p, Vec3::UnitZ())};
}

LocalSdf capsuleSdf(const Capsule& c, const Vec3& p)
{
  const double h = 0.5 * c.length;
  const Vec3 axis_point(0.0, 0.0, std::clamp(p.z(), -h, h));
  const Vec3 v = p - axis_point;
  return {v.norm() - c.radius, unitOr(v, Vec3::UnitX())};
}

LocalSdf boxSdf(const Box& b, const Vec3& p)
{
  const Vec3 half(0.5 * b.a, 0.5 * b.b, 0.5 * b.c);
  const Vec3 q = p.cwiseAbs() - half;
  const Vec3 outside = q.cwiseMax(0.0);
  if (outside.squaredNorm() > 0.0)
  {
    const double d = outside.norm();
    Vec3 n = outside / d;
    for (int i = 0; i < 3; ++i)
      n[i] *= signOf(p[i]);
    return {d, n};
  }
  int axis = 0;
  q.maxCoeff(&axis);
  Vec3 n = Vec3::Zero();
  n[axis] = signOf(p[axis]);
  return {q[axis], n};
}

// Closest point on an ellipse / ellipsoid, after D. Eberly, "Distance from a
// Point to an Ellipse, an Ellipsoid, or a Hyperellipsoid". Axes sorted
// e0 >= e1 (>= e2), query point in the first quadrant / octant.
constexpr int kRootIterations = 200;

double robustLength(double a, double b)
{
  return std::hypot(a, b);
}

double robustLength(double a, double b, double c)
{
  return std::sqrt(a * a + b * b + c * c);
}

// g(s) = sum (n_i / (s + r_i))^2 - 1 is convex and decreasing on the bracket,
// so Newton from the left end (g >= 0) climbs monotonically onto the root.
// The bracket clamp guards the last ulps.
template <std::size_t N>
double rootSecular(const std::array<double, N>& n, const std::array<double, N>& r, double s0, double s1)
{
  double s = s0;
  for (int i = 0; i < kRootIterations; ++i)
  {
    double g = -1.0;
    double dg = 0.0;
    for (std::size_t k = 0; k < N; ++k)
    {
      const double ratio = n[k] / (s + r[k]);
      g += ratio * ratio;
      dg -= 2.0 * ratio * ratio / (s + r[k]);
    }
    if (g <= 0.0 || dg == 0.0)
      break;
    const double next = std::min(s1, s - g / dg);
    if (next <= s)
      break;
    s = next;
  }
  return s;
}

double rootEllipse(double r0, double z0, double z1, double g)
{
  const double n0 = r0 * z0;
  const double s0 = z1 - 1.0;
  const double s1 = g < 0.0 ? 0.0 : robustLength(n0, z1) - 1.0;
  return rootSecular<2>({n0, z1}, {r0, 1.0}, s0, s1);
}

double rootEllipsoid(double r0, double r1, double z0, double z1, double z2, double g)
{
  const double n0 = r0 * z0;
  const double n1 = r1 * z1;
  const double s0 = z2 - 1.0;
  const double s1 = g < 0.0 ? 0.0 : robustLength(n0, n1, z2) - 1.0;
  return rootSecular<3>({n0, n1, z2}, {r0, r1, 1.0}, s0, s1);
}

void closestOnEllipse(double e0, double e1, double y0, double y1, double& x0, double& x1)
{
  if (y1 > 0.0)
  {
    if (y0 > 0.0)
    {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g != 0.0)
      {
        const double r0 = (e0 / e1) * (e0 / e1);
        const double sbar = rootEllipse(r0, z0, z1, g);
        x0 = r0 * y0 / (sbar + r0);
        x1 = y1 / (sbar + 1.0);
      }
      else
      {
        x0 = y0;
        x1 = y1;
      }
    }
    else
    {
      x0 = 0.0;
      x1 = e1;
    }
    return;
  }
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0)
  {
    const double xde0 = numer0 / denom0;
    x0 = e0 * xde0;
    x1 = e1 * std::sqrt(1.0 - xde0 * xde0);
  }
  else
  {
    x0 = e0;
    x1 = 0.0;
  }
}

// e sorted descending, y non-negative; writes the closest point into x.
void closestOnEllipsoid(const std::array<double, 3>& e, const std::array<double, 3>& y,
                        std::array<double, 3>& x)
{
  if (y[2] > 0.0)
  {
    if (y[1] > 0.0)
    {
      if (y[0] > 0.0)
      {
        const double z0 = y[0] / e[0];
        const double z1 = y[1] / e[1];
        const double z2 = y[2] / e[2];
        const double g = z0 * z0 + z1 * z1 + z2 * z2 - 1.0;
        if (g != 0.0)
        {
          const double r0 = (e[0] / e[2]) * (e[0] / e[2]);
          const double r1 = (e[1] / e[2]) * (e[1] / e[2]);
          const double sbar = rootEllipsoid(r0, r1, z0, z1, z2, g);
          x[0] = r0 * y[0] / (sbar + r0);
          x[1] = r1 * y[1] / (sbar + r1);
          x[2] = y[2] / (sbar + 1.0);
        }
        else
        {
          x = y;
        }
      }
      else
      {
        x[0] = 0.0;
        closestOnEllipse(e[1], e[2], y[1], y[2], x[1], x[2]);
      }
    }
    else
    {
      x[1] = 0.0;
      if (y[0] > 0.0)
      {
        closestOnEllipse(e[0], e[2], y[0], y[2], x[0], x[2]);
      }
      else
      {
        x[0] = 0.0;
        x[2] = e[2];
      }
    }
    return;
  }

  const double denom0 = e[0] * e[0] - e[2] * e[2];
  const double denom1 = e[1] * e[1] - e[2] * e[2];
  const double numer0 = e[0] * y[0];
  const double numer1 = e[1] * y[1];
  if (numer0 < denom0 && numer1 < denom1)
  {
    const double xde0 = numer0 / denom0;
    const double xde1 = numer1 / denom1;
    const double discr = 1.0 - xde0 * xde0 - xde1 * xde1;
    if (discr > 0.0)
    {
      x[0] = e[0] * xde0;
      x[1] = e[1] * xde1;
      x[2] = e[2] * std::sqrt(discr);
      return;
    }
  }
  x[2] = 0.0;
  closestOnEllipse(e[0], e[1], y[0], y[1], x[0], x[1]);
}

LocalSdf ellipsoidSdf(const Ellipsoid& el, const Vec3& p)
{
  const std::array<double, 3> axes{el.a, el.b, el.c};
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return axes[i] > axes[j]; });

  std::array<double, 3> e{}, y{}, x{};
  for (int k = 0; k < 3; ++k)
  {
    e[k] = axes[order[k]];
    y[k] = std::abs(p[order[k]]);
  }
  closestOnEllipsoid(e, y, x);

  Vec3 closest, gradient;
  for (int k = 0; k < 3; ++k)
  {
    const int axis = order[k];
    const double sign = signOf(p[axis]);
    closest[axis] = sign * x[k];
    gradient[axis] = sign * x[k] / (e[k] * e[k]);
  }
  const double level = (p.x() / el.a) * (p.x() / el.a) + (p.y() / el.b) * (p.y() / el.b) +
                       (p.z() / el.c) * (p.z() / el.c);
  const double d = (p - closest).norm();
  return {level < 1.0 ? -d : d, unitOr(gradient, Vec3::UnitZ())};
}

struct Segment2
{
  Eigen::Vector2d a, b;
  Eigen::Vector2d outward;
};

LocalSdf frustumSdf(const Frustum& f, const Vec3& p)
{
  const double h = 0.5 * f.height;
  const double rho = std::hypot(p.x(), p.y());
  const Eigen::Vector2d q(rho, p.z());

  const Eigen::Vector2d side_dir(f.r_top - f.r_bottom, f.height);
  const Eigen::Vector2d side_out = Eigen::Vector2d(side_dir.y(), -side_dir.x()).normalized();
  const std::array<Segment2, 3> edges{{
    {{0.0, -h}, {f.r_bottom, -h}, {0.0, -1.0}},
    {{f.r_bottom, -h}, {f.r_top, h}, side_out},
    {{f.r_top, h}, {0.0, h}, {0.0, 1.0}},
  }};

  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector2d closest = Eigen::Vector2d::Zero();
  Eigen::Vector2d edge_normal = Eigen::Vector2d::UnitY();
  for (const auto& e : edges)
  {
    const Eigen::Vector2d ab = e.b - e.a;
    const double t = std::clamp((q - e.a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    const Eigen::Vector2d c = e.a + t * ab;
    const double dist = (q - c).norm();
    if (dist < best)
    {
      best = dist;
      closest = c;
      edge_normal = e.outward;
    }
  }

  const double radius_at_z = f.r_bottom + (f.r_top - f.r_bottom) * (p.z() + h) / f.height;
  const bool inside = p.z() >= -h && p.z() <= h && rho <= radius_at_z;

  Eigen::Vector2d n2 = edge_normal;
  if (best > 0.0)
    n2 = inside ? Eigen::Vector2d((closest - q) / best) : Eigen::Vector2d((q - closest) / best);

  const Eigen::Vector2d radial =
    rho > 0.0 ? Eigen::Vector2d(p.x() / rho, p.y() / rho) : Eigen::Vector2d(1.0, 0.0);
  return {inside ? -best : best, Vec3(n2.x() * radial.x(), n2.x() * radial.y(), n2.y())};
}

// Wall normals from rotated faces carry rounding in z.
constexpr double kWallTolerance = 1e-9;

}  // namespace

std::string shape_name(const Shape& shape)
{
  return std::visit(Overloaded{
                      [](const Sphere&) { return std::string("sphere"); },
                      [](const Capsule&) { return std::string("capsule"); },
                      [](const Box&) { return std::string("box"); },
                      [](const Ellipsoid&) { return std::string("ellipsoid"); },
                      [](const Frustum&) { return std::string("frustum"); },
                    },
                    shape);
}

double min_dimension(const Shape& shape)
{
  return std::visit(Overloaded{
                      [](const Sphere& s) { return s.radius; },
                      [](const Capsule& c) { return std::min(c.radius, c.length); },
                      [](const Box& b) { return std::min({b.a, b.b, b.c}); },
                      [](const Ellipsoid& e) { return std::min({e.a, e.b, e.c}); },
                      [](const Frustum& f) { return std::min({f.r_top, f.r_bottom, f.height}); },
                    },
                    shape);
}

void validate(const RigidObject& object)
{
  const bool dims_ok = std::visit(
    Overloaded{
      [](const Sphere& s) { return s.radius > 0.0; },
      [](const Capsule& c) { return c.radius > 0.0 && c.length > 0.0; },
      [](const Box& b) { return b.a > 0.0 && b.b > 0.0 && b.c > 0.0; },
      [](const Ellipsoid& e) { return e.a > 0.0 && e.b > 0.0 && e.c > 0.0; },
      [](const Frustum& f) { return f.r_top > 0.0 && f.r_bottom > 0.0 && f.height > 0.0; },
    },
    object.shape);
  if (!dims_ok)
    throw ConstructionError(shape_name(object.shape) + " dimensions must be positive");
  if (!(object.mass >= 0.0))
    throw ConstructionError("object mass must be non-negative");
  if (!(object.mu >= 0.0))
    throw ConstructionError("friction coefficient must be non-negative");
}

void validate(const ContactParams& params)
{
  if (!(params.k_contact > 0.0))
    throw ConstructionError("k_contact must be positive");
  if (!(params.k_tangential > 0.0))
    throw ConstructionError("k_tangential must be positive");
  if (!(params.mu_default >= 0.0) || !(params.gravity >= 0.0))
    throw ConstructionError("mu_default and gravity must be non-negative");
}

SdfSample signed_distance(const RigidObject& object, const Vec3& point, const Vec3& offset)
{
  const Eigen::Matrix3d rotation = object.pose.orientation.toRotationMatrix();
  const Vec3 local = rotation.transpose() * (point - object.pose.position - offset);
  const LocalSdf s = std::visit(Overloaded{
                                  [&](const Sphere& v) { return sphereSdf(v, local); },
                                  [&](const Capsule& v) { return capsuleSdf(v, local); },
                                  [&](const Box& v) { return boxSdf(v, local); },
                                  [&](const Ellipsoid& v) { return ellipsoidSdf(v, local); },
                                  [&](const Frustum& v) { return frustumSdf(v, local); },
                                },
                                object.shape);
  return {s.distance, rotation * s.normal};
}

bool FrictionState::empty() const
{
  return std::none_of(anchors.begin(), anchors.end(), [](const auto& a) { return a.has_value(); });
}

ContactEvaluation contact_forces(std::span<const Vec3> positions, const RigidObject& object,
                                 const ContactParams& params, const FrictionState* friction,
                                 const Vec3& offset)
{
  const std::size_t n = positions.size();
  ContactEvaluation out;
  out.normal_forces.assign(n, Vec3::Zero());
  out.tangential_forces.assign(n, Vec3::Zero());
  out.forces.assign(n, Vec3::Zero());
  out.normals.assign(n, Vec3::Zero());
  out.distances.assign(n, 0.0);

  const bool use_friction = friction && friction->anchors.size() == n;
  for (std::size_t i = 0; i < n; ++i)
  {
    const SdfSample s = signed_distance(object, positions[i], offset);
    out.distances[i] = s.distance;
    if (s.distance < 0.0)
    {
      out.normal_forces[i] = -params.k_contact * s.distance * s.normal;
      out.normals[i] = s.normal;
      out.energy += 0.5 * params.k_contact * s.distance * s.distance;
    }

    if (use_friction && friction->anchors[i] && friction->anchors[i]->cap > 0.0)
    {
      const FrictionAnchor& a = *friction->anchors[i];
      const Vec3 u = positions[i] - offset - a.anchor;
      const Vec3 ut = u - u.dot(a.normal) * a.normal;
      const double slip = ut.norm();
      if (params.k_tangential * slip <= a.cap)
      {
        out.energy += 0.5 * params.k_tangential * slip * slip;
        out.tangential_forces[i] = -params.k_tangential * ut;
      }
      else
      {
        out.energy += a.cap * slip - a.cap * a.cap / (2.0 * params.k_tangential);
        out.tangential_forces[i] = -a.cap / slip * ut;
      }
    }
    out.forces[i] = out.normal_forces[i] + out.tangential_forces[i];
    out.object_force -= out.forces[i];
  }
  return out;
}

void update_friction(FrictionState& state, std::span<const Vec3> positions,
                     const RigidObject& object, const ContactParams& params, const Vec3& offset)
{
  state.anchors.resize(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i)
  {
    const SdfSample s = signed_distance(object, positions[i], offset);
    auto& slot = state.anchors[i];
    if (!(s.distance < 0.0))
    {
      slot.reset();
      continue;
    }
    const double cap = object.mu * params.k_contact * -s.distance;
    const Vec3 rel = positions[i] - offset;
    if (!slot)
    {
      slot = FrictionAnchor{rel, s.normal, cap};
      continue;
    }
    const Vec3 u = rel - slot->anchor;
    const Vec3 ut = u - u.dot(slot->normal) * slot->normal;
    const double slip = ut.norm();
    if (params.k_tangential * slip > cap && slip > 0.0)
      slot->anchor += ut * (1.0 - cap / (params.k_tangential * slip));
    slot->normal = s.normal;
    slot->cap = cap;
  }
}

HoldReport hold_check(const EquilibriumResult& result, const RigidObject& object,
                      const ContactParams& params)
{
  if (!result.converged)
    throw PreconditionError("hold_check needs a converged equilibrium");

  HoldReport report;
  report.weight = object.mass * params.gravity;
  for (std::size_t i = 0; i < result.normal_forces.size(); ++i)
  {
    const double fn = result.normal_forces[i].norm();
    if (fn == 0.0)
      continue;
    // The reaction on the object is -fn * n. Contacts that push it down
    // (above the equator) neither support nor carry friction; side walls do.
    const double up = -result.contact_normals[i].z();
    if (up < -kWallTolerance)
      continue;
    report.normal_support += fn * std::max(0.0, up);
    report.friction_budget += object.mu * fn;
  }
  report.margin = report.normal_support + report.friction_budget - report.weight;
  report.verdict = report.margin >= 0.0 ? HoldVerdict::Held : HoldVerdict::Slips;
  return report;
}

std::string to_string(HoldVerdict verdict)
{
  return verdict == HoldVerdict::Held ? "held" : "slips";
}

}  // namespace netgrip
