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

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace netgrip
{

struct NetMesh;
struct EquilibriumResult;

/// Piezoresistive element read through a divider.
///
///   R(F) = R_sat + (R0 - R_sat) exp(-F / F_c)
///   V(R) = V_supply * R (R0 + R_ref) / (R0 (R + R_ref))
///
/// so V(R0) = V_supply exactly and the element stops responding by F_sat.
/// The default constants are synthetic: they give the documented shape
/// (5 V unloaded, monotone, flat beyond 5 N), not a measured device.
struct SensorModel
{
  double r0 = 20000.0;     // ohm at zero force
  double r_sat = 2000.0;   // ohm asymptote
  double f_c = 1.0;        // N, decay constant
  double f_sat = 5.0;      // N
  double r_ref = 10000.0;  // ohm, divider reference
  double v_supply = 5.0;   // V

  bool operator==(const SensorModel&) const = default;
};

void validate(const SensorModel& model);

struct SensorSpec
{
  int id = 1;  // 1..4
  std::vector<int> patch_nodes;
  SensorModel model;
};

/// Places four patches at 90 deg spacing: each covers rings [ring_lo, ring_hi]
/// and the columns within `half_width` of its centre column. Sensor k (1-based)
/// is centred at azimuth angle_offset_deg + 90 (k - 1).
struct SensorPlacement
{
  int ring_lo = 3;
  int ring_hi = 4;
  int half_width = 1;
  double angle_offset_deg = 0.0;
};

std::array<SensorSpec, kSensorCount> place_sensors(const NetMesh& mesh, const SensorPlacement& placement,
                                                   const SensorModel& model);

/// Throws ConstructionError on overlapping patches or out-of-range nodes.
void validate(const std::array<SensorSpec, kSensorCount>& sensors, std::size_t node_count);

double force_to_resistance(const SensorModel& model, double force);
double resistance_to_voltage(const SensorModel& model, double resistance);
double force_to_voltage(const SensorModel& model, double force);

struct SensorReading
{
  double voltage;  // V
  double force;    // N, sum of contact normal magnitudes over the patch
};

SensorReading read_sensor(const SensorSpec& spec, const EquilibriumResult& result);

struct CalibrationRow
{
  double force;
  double resistance;
  double voltage;

  bool operator==(const CalibrationRow&) const = default;
};

struct CalibrationCurve
{
  SensorModel model;
  std::vector<CalibrationRow> rows;

  bool operator==(const CalibrationCurve&) const = default;
};

/// Tabulates the model on [0, f_max] with the given step (inclusive ends).
CalibrationCurve make_calibration(const SensorModel& model, double f_max, double step);

struct ForceEstimate
{
  double force;    // N
  bool saturated;  // estimate at or beyond F_sat, unreliable
};

/// Inverse of the composed force -> voltage map. Voltages at or under the
/// asymptote clamp to the table's largest force.
ForceEstimate voltage_to_force(const CalibrationCurve& curve, double voltage);

/// CSV with `# model` comment lines carrying the parameters, then
/// `force,resistance,voltage` rows. Doubles use round-trip precision.
void write_calibration_csv(std::ostream& out, const CalibrationCurve& curve);
CalibrationCurve read_calibration_csv(std::istream& in);

}  // namespace netgrip
