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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace netgrip
{
namespace
{

constexpr int kProfileSamples = 65;
constexpr int kScanSamples = 2001;

// Law of cosines in the triangle (claw pivot, rod pin on claw, slider pin).
std::optional<double> rodTriangleAngle(double attach, double slider_depth, double rod)
{
  const double c = (attach * attach + slider_depth * slider_depth - rod * rod) /
                   (2.0 * attach * slider_depth);
  if (c > 1.0 + 1e-12 || c < -1.0 - 1e-12)
    return std::nullopt;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

struct Candidate
{
  double rod_length;
  double claw_length;
  double pivot_radius;
  double objective;
};

std::optional<Candidate> evaluateCandidate(double rod, double closed, double open, double travel,
                                           double attach, double offset)
{
  const auto theta0 = rodTriangleAngle(attach, offset, rod);
  const auto theta1 = rodTriangleAngle(attach, offset - travel, rod);
  if (!theta0 || !theta1 || *theta1 >= std::numbers::pi / 2)
    return std::nullopt;

  const double swing = std::sin(*theta1) - std::sin(*theta0);
  if (!(swing > 0.0))
    return std::nullopt;

  const double claw = 0.5 * (open - closed) / swing;
  const double pivot = 0.5 * closed - claw * std::sin(*theta0);
  if (!(claw > 0.0) || pivot < kMinPivotFraction * 0.5 * closed)
    return std::nullopt;

  double sum = 0.0;
  double previous = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kProfileSamples; ++i)
  {
    const double s = travel * i / (kProfileSamples - 1);
    const auto theta = rodTriangleAngle(attach, offset - s, rod);
    if (!theta || *theta <= previous)
      return std::nullopt;
    previous = *theta;
    const double ap = 2.0 * (pivot + claw * std::sin(*theta));
    const double chord = closed + (open - closed) * s / travel;
    sum += (ap - chord) * (ap - chord);
  }
  return Candidate{rod, claw, pivot, sum / kProfileSamples};
}

double objectiveOrInf(double rod, double closed, double open, double travel, double attach,
                      double offset)
{
  const auto c = evaluateCandidate(rod, closed, open, travel, attach, offset);
  return c ? c->objective : std::numeric_limits<double>::infinity();
}

void requireTravel(const LinkageConfig& config, double s)
{
  if (!(s >= 0.0 && s <= config.travel_max))
    throw DomainError("slider travel " + std::to_string(s) + " mm outside [0, " +
                      std::to_string(config.travel_max) + "]");
}

}  // namespace

LinkageConfig fit_linkage(double aperture_closed, double aperture_open, double travel_max)
{
  if (!(aperture_closed > 0.0) || !(aperture_open > aperture_closed) || !(travel_max > 0.0) ||
      !std::isfinite(aperture_open) || !std::isfinite(travel_max))
    throw DomainError("fit_linkage requires 0 < aperture_closed < aperture_open and travel_max > 0");

  const double attach = kRodAttachPerTravel * travel_max;
  const double offset = kSliderOffsetPerTravel * travel_max;
  const double min_depth = offset - travel_max;

  // Rod lengths between these keep the triangle closed and the claw below
  // horizontal over the whole stroke.
  const double rod_lo = offset - attach;
  const double rod_hi = std::sqrt(attach * attach + min_depth * min_depth) * (1.0 - 1e-9);

  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  const double step = (rod_hi - rod_lo) / (kScanSamples - 1);
  for (int i = 0; i < kScanSamples; ++i)
  {
    const double rod = rod_lo + step * i;
    const double value =
      objectiveOrInf(rod, aperture_closed, aperture_open, travel_max, attach, offset);
    if (value < best_value)
    {
      best_value = value;
      best = i;
    }
  }
  if (best < 0)
    throw FittingError("no feasible claw geometry for the requested apertures",
                       aperture_open - aperture_closed);

  // Golden-section refinement inside the bracketing scan cell.
  double lo = rod_lo + step * std::max(0, best - 1);
  double hi = rod_lo + step * std::min(kScanSamples - 1, best + 1);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = objectiveOrInf(x1, aperture_closed, aperture_open, travel_max, attach, offset);
  double f2 = objectiveOrInf(x2, aperture_closed, aperture_open, travel_max, attach, offset);
  for (int iter = 0; iter < 100 && hi - lo > 1e-12 * rod_hi; ++iter)
  {
    if (f1 <= f2)
    {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = objectiveOrInf(x1, aperture_closed, aperture_open, travel_max, attach, offset);
    }
    else
    {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = objectiveOrInf(x2, aperture_closed, aperture_open, travel_max, attach, offset);
    }
  }

  double rod = rod_lo + step * best;
  if (std::min(f1, f2) < best_value)
    rod = f1 <= f2 ? x1 : x2;
  const auto fit = evaluateCandidate(rod, aperture_closed, aperture_open, travel_max, attach, offset);
  if (!fit)
    throw FittingError("linkage refinement left the feasible region", best_value);

  LinkageConfig config;
  config.travel_max = travel_max;
  config.aperture_closed = aperture_closed;
  config.aperture_open = aperture_open;
  config.claw_length = fit->claw_length;
  config.rod_length = fit->rod_length;
  config.pivot_radius = fit->pivot_radius;
  config.rod_attach = attach;
  config.slider_offset = offset;

  const double residual = std::max(std::abs(aperture(config, 0.0) - aperture_closed),
                                   std::abs(aperture(config, travel_max) - aperture_open));
  if (residual > 1e-6)
    throw FittingError("fitted linkage misses the aperture endpoints", residual);
  return config;
}

void validate(const LinkageConfig& config)
{
  if (config.claw_count != kClawCount)
    throw ConstructionError("claw_count must be 8");
  if (!(config.aperture_closed > 0.0) || !(config.aperture_open > config.aperture_closed))
    throw ConstructionError("apertures must satisfy 0 < closed < open");
  if (!(config.travel_max > 0.0))
    throw ConstructionError("travel_max must be positive");
  if (!(config.claw_length > 0.0) || !(config.rod_length > 0.0) || !(config.pivot_radius > 0.0) ||
      !(config.rod_attach > 0.0) || !(config.slider_offset > config.travel_max))
    throw ConstructionError("link lengths must be positive and the slider must stay below the hub");

  for (const double s : {0.0, config.travel_max})
    if (!rodTriangleAngle(config.rod_attach, config.slider_offset - s, config.rod_length))
      throw ConstructionError("rod triangle cannot close over the stroke");

  const double residual = std::max(std::abs(aperture(config, 0.0) - config.aperture_closed),
                                   std::abs(aperture(config, config.travel_max) - config.aperture_open));
  if (residual > 1e-6)
    throw ConstructionError("link lengths do not reproduce the aperture endpoints (residual " +
                            std::to_string(residual) + " mm)");
}

double claw_angle(const LinkageConfig& config, double s)
{
  requireTravel(config, s);
  const auto theta =
    rodTriangleAngle(config.rod_attach, config.slider_offset - s, config.rod_length);
  if (!theta)
    throw DomainError("rod triangle cannot close at s = " + std::to_string(s));
  return *theta;
}

double aperture(const LinkageConfig& config, double s)
{
  return 2.0 * (config.pivot_radius + config.claw_length * std::sin(claw_angle(config, s)));
}

std::array<Vec3, kClawCount> claw_tips(const LinkageConfig& config, double s)
{
  const double theta = claw_angle(config, s);
  const double radius = config.pivot_radius + config.claw_length * std::sin(theta);
  const double z = -config.claw_length * std::cos(theta);

  std::array<Vec3, kClawCount> tips;
  for (int k = 0; k < kClawCount; ++k)
  {
    const double phi = 2.0 * std::numbers::pi * k / kClawCount;
    tips[k] = Vec3(radius * std::cos(phi), radius * std::sin(phi), z);
  }
  return tips;
}

LinkageState linkage_state(const LinkageConfig& config, double s)
{
  LinkageState state;
  state.s = s;
  state.tip_positions = claw_tips(config, s);
  state.aperture = aperture(config, s);
  return state;
}

double slider_for_aperture(const LinkageConfig& config, double d)
{
  if (!(d >= config.aperture_closed && d <= config.aperture_open))
    throw DomainError("aperture " + std::to_string(d) + " mm outside [" +
                      std::to_string(config.aperture_closed) + ", " +
                      std::to_string(config.aperture_open) + "]");
  if (d == config.aperture_closed)
    return 0.0;
  if (d == config.aperture_open)
    return config.travel_max;

  const double sin_theta = std::clamp((0.5 * d - config.pivot_radius) / config.claw_length, 0.0, 1.0);
  const double cos_theta = std::sqrt(1.0 - sin_theta * sin_theta);
  const double a = config.rod_attach;
  const double l = config.rod_length;
  const double depth = a * cos_theta + std::sqrt(l * l - a * a * sin_theta * sin_theta);
  return std::clamp(config.slider_offset - depth, 0.0, config.travel_max);
}

}  // namespace netgrip
