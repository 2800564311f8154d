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

// Independent reference computations shared by the unit and acceptance
// tests. Nothing here calls into the library's numerics.

#pragma once

#include "netgrip/linkage.hpp"
#include "netgrip/phases.hpp"
#include "netgrip/scenario.hpp"
#include "netgrip/sensing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace oracle
{

inline std::filesystem::path scenario_path(const std::string& name)
{
  return std::filesystem::path(NETGRIP_SCENARIO_DIR) / (name + ".json");
}

inline std::vector<std::string> bundled_scenarios()
{
  return {"banana_capsule", "egg_ellipsoid",    "empty",       "family_cherry_tomato", "family_orange",
          "family_plum",    "frustum_inverted", "sphere_d40",  "stapler_box"};
}

/// Root of a monotone function on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200)
{
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i)
  {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0))
    {
      lo = mid;
      flo = fm;
    }
    else
    {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Claw angle from the rod-length constraint, solved by bisection rather
/// than the law of cosines.
inline double claw_angle(const netgrip::LinkageConfig& c, double s)
{
  const double depth = c.slider_offset - s;
  auto gap = [&](double theta) {
    const double px = c.rod_attach * std::sin(theta);
    const double pz = -c.rod_attach * std::cos(theta);
    const double dz = pz + depth;
    return px * px + dz * dz - c.rod_length * c.rod_length;
  };
  return bisect(gap, 0.0, std::acos(-1.0) / 2.0);
}

inline double aperture(const netgrip::LinkageConfig& c, double s)
{
  return 2.0 * (c.pivot_radius + c.claw_length * std::sin(oracle::claw_angle(c, s)));
}

/// Slider travel for aperture d: bisection on the forward oracle.
inline double slider_for_aperture(const netgrip::LinkageConfig& c, double d)
{
  return bisect([&](double s) { return oracle::aperture(c, s) - d; }, 0.0, c.travel_max);
}

/// Divider voltage written out from the circuit: raw divider output
/// rescaled so the unloaded element reads the supply.
inline double divider_volts(const netgrip::SensorModel& m, double r)
{
  const double raw = m.v_supply * r / (r + m.r_ref);
  const double raw_at_rest = m.v_supply * m.r0 / (m.r0 + m.r_ref);
  return raw * (m.v_supply / raw_at_rest);
}

inline double element_ohms(const netgrip::SensorModel& m, double f)
{
  return m.r_sat + (m.r0 - m.r_sat) * std::exp(-f / m.f_c);
}

inline double sensor_volts(const netgrip::SensorModel& m, double f)
{
  return divider_volts(m, element_ohms(m, f));
}

/// Force for a voltage by bisection on the forward chain.
inline double sensor_force(const netgrip::SensorModel& m, double v)
{
  return bisect([&](double f) { return oracle::sensor_volts(m, f) - v; }, 0.0, 50.0);
}

/// Central-difference gradient of a scalar function of packed coordinates.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-6)
{
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// Corner sample indices of a synthetic grasp trace: approach ends at c[0],
/// closing at c[1], hold at c[2], opening at c[3]; n samples in total.
struct Trapezoid
{
  std::size_t n = 800;
  std::array<std::size_t, 4> corners{150, 250, 500, 560};
  std::array<double, netgrip::kSensorCount> plateau{3.0, 3.4, 2.6, 3.8};
  double dt = 0.01;
  double t0 = 0.0;
};

inline double trapezoid_value(const Trapezoid& z, double low, std::size_t i)
{
  const auto& c = z.corners;
  const double base = netgrip::kBaselineVolts;
  if (i <= c[0] || i >= c[3])
    return base;
  if (i < c[1])
    return base + (low - base) * double(i - c[0]) / double(c[1] - c[0]);
  if (i <= c[2])
    return low;
  return low + (base - low) * double(i - c[2]) / double(c[3] - c[2]);
}

/// Piecewise-linear five-step trace, optional seeded Gaussian noise clamped
/// to (0, 5].
inline netgrip::Trace trapezoid(const Trapezoid& z, double sigma = 0.0, std::uint64_t seed = 1)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
  netgrip::Trace tr;
  for (std::size_t i = 0; i < z.n; ++i)
    tr.t.push_back(z.t0 + z.dt * double(i));
  for (int k = 0; k < netgrip::kSensorCount; ++k)
  {
    tr.v[k].resize(z.n);
    for (std::size_t i = 0; i < z.n; ++i)
    {
      double v = trapezoid_value(z, z.plateau[k], i);
      if (sigma > 0.0)
        v = std::clamp(v + noise(rng), 1e-3, netgrip::kBaselineVolts);
      tr.v[k][i] = v;
    }
  }
  return tr;
}

}  // namespace oracle
