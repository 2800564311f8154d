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

#include "netgrip/sensing.hpp"

#include "netgrip/csv.hpp"
#include "netgrip/net.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <string>

namespace netgrip
{

void validate(const SensorModel& m)
{
  if (!(m.r0 > 0.0) || !(m.r_ref > 0.0) || !(m.f_sat > 0.0))
    throw ConstructionError("sensor R0, R_ref and F_sat must be positive");
  if (!(m.r_sat > 0.0) || !(m.r_sat < m.r0))
    throw ConstructionError("sensor R_sat must lie in (0, R0)");
  if (!(m.f_c > 0.0) || !(m.v_supply > 0.0))
    throw ConstructionError("sensor F_c and V_supply must be positive");
}

std::array<SensorSpec, kSensorCount> place_sensors(const NetMesh& mesh, const SensorPlacement& placement,
                                                   const SensorModel& model)
{
  validate(model);
  if (placement.ring_lo < 1 || placement.ring_hi > mesh.rings || placement.ring_lo > placement.ring_hi)
    throw ConstructionError("sensor rings must lie in [1, rings]");
  if (placement.half_width < 0 || 2 * placement.half_width + 1 > mesh.segments / kSensorCount)
    throw ConstructionError("sensor patches would overlap");

  std::array<SensorSpec, kSensorCount> sensors;
  const double column_angle = 360.0 / mesh.segments;
  for (int k = 0; k < kSensorCount; ++k)
  {
    const double centre_deg = placement.angle_offset_deg + 90.0 * k;
    const int centre = static_cast<int>(std::lround(centre_deg / column_angle));
    sensors[k].id = k + 1;
    sensors[k].model = model;
    for (int ring = placement.ring_lo; ring <= placement.ring_hi; ++ring)
      for (int dj = -placement.half_width; dj <= placement.half_width; ++dj)
      {
        const int node = mesh.node(ring, centre + dj);
        if (!mesh.fixed[node])
          sensors[k].patch_nodes.push_back(node);
      }
    std::sort(sensors[k].patch_nodes.begin(), sensors[k].patch_nodes.end());
  }
  validate(sensors, mesh.node_count());
  return sensors;
}

void validate(const std::array<SensorSpec, kSensorCount>& sensors, std::size_t node_count)
{
  std::set<int> seen;
  for (int k = 0; k < kSensorCount; ++k)
  {
    validate(sensors[k].model);
    if (sensors[k].id != k + 1)
      throw ConstructionError("sensor ids must be 1..4 in order");
    for (const int node : sensors[k].patch_nodes)
    {
      if (node < 0 || static_cast<std::size_t>(node) >= node_count)
        throw ConstructionError("sensor " + std::to_string(k + 1) + " patch node out of range");
      if (!seen.insert(node).second)
        throw ConstructionError("sensor patches overlap at node " + std::to_string(node));
    }
  }
}

double force_to_resistance(const SensorModel& m, double force)
{
  if (!(force >= 0.0))
    throw DomainError("force must be non-negative");
  // expm1 keeps R(0) == R0 bit-exact.
  return m.r0 + (m.r0 - m.r_sat) * std::expm1(-force / m.f_c);
}

double resistance_to_voltage(const SensorModel& m, double resistance)
{
  if (!(resistance > 0.0))
    throw DomainError("resistance must be positive");
  const double numerator = resistance * (m.r0 + m.r_ref);
  const double denominator = m.r0 * (resistance + m.r_ref);
  return m.v_supply * (numerator / denominator);
}

double force_to_voltage(const SensorModel& m, double force)
{
  return resistance_to_voltage(m, force_to_resistance(m, force));
}

SensorReading read_sensor(const SensorSpec& spec, const EquilibriumResult& result)
{
  double force = 0.0;
  for (const int node : spec.patch_nodes)
    force += result.normal_forces.at(node).norm();
  return {force_to_voltage(spec.model, force), force};
}

CalibrationCurve make_calibration(const SensorModel& model, double f_max, double step)
{
  validate(model);
  if (!(f_max > 0.0) || !(step > 0.0) || step > f_max)
    throw DomainError("calibration grid needs 0 < step <= f_max");
  CalibrationCurve curve;
  curve.model = model;
  const auto count = static_cast<std::size_t>(std::floor(f_max / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i)
  {
    const double f = std::min(f_max, step * static_cast<double>(i));
    const double r = force_to_resistance(model, f);
    curve.rows.push_back({f, r, resistance_to_voltage(model, r)});
  }
  return curve;
}

ForceEstimate voltage_to_force(const CalibrationCurve& curve, double voltage)
{
  const SensorModel& m = curve.model;
  if (!(voltage > 0.0 && voltage <= m.v_supply))
    throw DomainError("voltage " + std::to_string(voltage) + " V outside (0, " +
                      std::to_string(m.v_supply) + "]");
  if (voltage == m.v_supply)
    return {0.0, false};

  const double ceiling = std::max(m.f_sat, curve.rows.empty() ? 0.0 : curve.rows.back().force);
  const double q = voltage * m.r0 / (m.v_supply * (m.r0 + m.r_ref));
  const double resistance = q * m.r_ref / (1.0 - q);
  if (resistance <= m.r_sat)
    return {ceiling, true};

  const double force = std::max(0.0, -m.f_c * std::log((resistance - m.r_sat) / (m.r0 - m.r_sat)));
  return {force, force >= m.f_sat};
}

void write_calibration_csv(std::ostream& out, const CalibrationCurve& curve)
{
  const SensorModel& m = curve.model;
  out << "# model r0=" << csv::format(m.r0) << " r_sat=" << csv::format(m.r_sat)
      << " f_c=" << csv::format(m.f_c) << " f_sat=" << csv::format(m.f_sat)
      << " r_ref=" << csv::format(m.r_ref) << " v_supply=" << csv::format(m.v_supply) << '\n';
  out << "force,resistance,voltage\n";
  for (const auto& row : curve.rows)
    out << csv::format(row.force) << ',' << csv::format(row.resistance) << ','
        << csv::format(row.voltage) << '\n';
}

CalibrationCurve read_calibration_csv(std::istream& in)
{
  CalibrationCurve curve;
  bool have_model = false;
  bool have_header = false;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line))
  {
    ++number;
    const std::string_view text = csv::trim(line);
    if (text.empty())
      continue;
    if (text.front() == '#')
    {
      if (text.substr(0, 7) != "# model")
        continue;
      for (const auto token : csv::split(text.substr(7), ' '))
      {
        if (token.empty())
          continue;
        const auto eq = token.find('=');
        if (eq == std::string_view::npos)
          throw FormatError("bad model token '" + std::string(token) + "'", number);
        const auto key = token.substr(0, eq);
        const double value = csv::parse(token.substr(eq + 1), number);
        if (key == "r0") curve.model.r0 = value;
        else if (key == "r_sat") curve.model.r_sat = value;
        else if (key == "f_c") curve.model.f_c = value;
        else if (key == "f_sat") curve.model.f_sat = value;
        else if (key == "r_ref") curve.model.r_ref = value;
        else if (key == "v_supply") curve.model.v_supply = value;
        else throw FormatError("unknown model key '" + std::string(key) + "'", number);
      }
      have_model = true;
      continue;
    }
    if (!have_header)
    {
      if (text != "force,resistance,voltage")
        throw FormatError("expected header force,resistance,voltage", number);
      have_header = true;
      continue;
    }
    const auto fields = csv::split(text);
    if (fields.size() != 3)
      throw FormatError("expected 3 fields", number);
    curve.rows.push_back(
      {csv::parse(fields[0], number), csv::parse(fields[1], number), csv::parse(fields[2], number)});
  }
  if (!have_model)
    throw FormatError("missing '# model' parameter line");
  if (!have_header)
    throw FormatError("missing header");
  try
  {
    validate(curve.model);
  }
  catch (const ConstructionError& e)
  {
    throw FormatError(e.what());
  }
  return curve;
}

}  // namespace netgrip
