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
#include "netgrip/sensing.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace netgrip;

TEST(SensorChain, UnloadedReadsExactlyFiveVolts)
{
  const SensorModel m;
  EXPECT_EQ(force_to_resistance(m, 0.0), m.r0);
  EXPECT_EQ(resistance_to_voltage(m, m.r0), 5.0);
  EXPECT_EQ(force_to_voltage(m, 0.0), 5.0);
}

TEST(SensorChain, FlatBeyondFiveNewtons)
{
  const SensorModel m;
  const double r5 = force_to_resistance(m, 5.0);
  const double r7 = force_to_resistance(m, 7.0);
  EXPECT_LT(std::abs(r7 - r5), 0.01 * (m.r0 - r5));

  const double h = 1e-4;
  const double slope0 = (force_to_resistance(m, h) - m.r0) / h;
  const double slope_sat = (force_to_resistance(m, 5.0 + h) - force_to_resistance(m, 5.0 - h)) / (2.0 * h);
  EXPECT_LT(std::abs(slope_sat), 0.01 * std::abs(slope0));
}

TEST(SensorChain, MidForceMatchesModel)
{
  const SensorModel m;
  constexpr double kOhmsAt2_5 = 3477.529975230178;
  constexpr double kVoltsAt2_5 = 1.935182104003;
  EXPECT_NEAR(oracle::element_ohms(m, 2.5), kOhmsAt2_5, 1e-9);
  EXPECT_NEAR(force_to_resistance(m, 2.5), kOhmsAt2_5, 1e-9);
  EXPECT_NEAR(force_to_voltage(m, 2.5), kVoltsAt2_5, 1e-11);
}

TEST(SensorChain, DividerAtHandComputedPoints)
{
  const SensorModel m;  // R0 20k, R_ref 10k, 5 V
  EXPECT_DOUBLE_EQ(resistance_to_voltage(m, 10000.0), 3.75);
  EXPECT_DOUBLE_EQ(resistance_to_voltage(m, 5000.0), 2.5);
  EXPECT_DOUBLE_EQ(resistance_to_voltage(m, 40000.0), 6.0);
  for (const double r : {10000.0, 5000.0, 40000.0})
    EXPECT_NEAR(resistance_to_voltage(m, r), oracle::divider_volts(m, r), 1e-12);
  EXPECT_LT(resistance_to_voltage(m, 1e-9), 1e-12);
}

TEST(SensorChain, OutOfDomainInputsThrow)
{
  const SensorModel m;
  const CalibrationCurve curve = make_calibration(m, 5.0, 0.05);
  EXPECT_THROW(force_to_resistance(m, -0.1), DomainError);
  EXPECT_THROW(resistance_to_voltage(m, 0.0), DomainError);
  EXPECT_THROW(resistance_to_voltage(m, -5.0), DomainError);
  EXPECT_THROW(voltage_to_force(curve, 0.0), DomainError);
  EXPECT_THROW(voltage_to_force(curve, 5.0001), DomainError);
  EXPECT_THROW(voltage_to_force(curve, std::nan("")), DomainError);
}

TEST(SensorChain, StrictlyDecreasingOnThousandPoints)
{
  const SensorModel m;
  double previous = force_to_voltage(m, 0.0);
  for (int i = 1; i < 1000; ++i)
  {
    const double v = force_to_voltage(m, m.f_sat * i / 1000.0);
    ASSERT_LT(v, previous) << "i=" << i;
    previous = v;
  }
}

TEST(Calibration, InverseMatchesBisectionOracle)
{
  const SensorModel m;
  const CalibrationCurve curve = make_calibration(m, 5.0, 0.05);
  constexpr double kForceAt3V = 1.349926716949;
  EXPECT_NEAR(oracle::sensor_force(m, 3.0), kForceAt3V, 1e-9);
  EXPECT_NEAR(voltage_to_force(curve, 3.0).force, kForceAt3V, 1e-9);

  for (int i = 0; i <= 450; ++i)
  {
    const double f = 0.01 * i;
    const ForceEstimate e = voltage_to_force(curve, force_to_voltage(m, f));
    EXPECT_NEAR(e.force, f, 1e-6) << "f=" << f;
    EXPECT_FALSE(e.saturated);
  }
}

TEST(Calibration, SaturationFlag)
{
  const SensorModel m;
  const CalibrationCurve curve = make_calibration(m, 5.0, 0.05);
  const ForceEstimate rest = voltage_to_force(curve, 5.0);
  EXPECT_EQ(rest.force, 0.0);
  EXPECT_FALSE(rest.saturated);

  EXPECT_TRUE(voltage_to_force(curve, force_to_voltage(m, 5.0)).saturated);
  EXPECT_TRUE(voltage_to_force(curve, force_to_voltage(m, 9.0)).saturated);
  // Below the asymptote the estimate clamps to the table ceiling.
  const ForceEstimate floor = voltage_to_force(curve, 0.01);
  EXPECT_TRUE(floor.saturated);
  EXPECT_EQ(floor.force, 5.0);
}

TEST(Calibration, TableShape)
{
  const CalibrationCurve curve = make_calibration(SensorModel{}, 5.0, 0.05);
  ASSERT_EQ(curve.rows.size(), 101u);
  EXPECT_EQ(curve.rows.front().force, 0.0);
  EXPECT_EQ(curve.rows.front().voltage, 5.0);
  EXPECT_EQ(curve.rows.back().force, 5.0);
  for (std::size_t i = 1; i < curve.rows.size(); ++i)
  {
    EXPECT_LE(curve.rows[i].resistance, curve.rows[i - 1].resistance);
    EXPECT_LT(curve.rows[i].voltage, curve.rows[i - 1].voltage);  // same order as resistance
  }
  EXPECT_THROW(make_calibration(SensorModel{}, 5.0, 0.0), DomainError);
  EXPECT_THROW(make_calibration(SensorModel{}, 1.0, 2.0), DomainError);
}

TEST(Calibration, CsvRoundTripIsExact)
{
  SensorModel m;
  m.f_c = 0.8125;
  m.r_ref = 12345.678;
  const CalibrationCurve curve = make_calibration(m, 6.0, 0.07);
  std::stringstream io;
  write_calibration_csv(io, curve);
  EXPECT_EQ(read_calibration_csv(io), curve);
}

namespace
{

std::size_t failing_line(const std::string& text)
{
  std::istringstream in(text);
  try
  {
    read_calibration_csv(in);
  }
  catch (const FormatError& e)
  {
    return e.line();
  }
  return 9999;
}

}  // namespace

TEST(Calibration, CsvErrorsCarryLineNumbers)
{
  const std::string head = "# model r0=20000 r_sat=2000 f_c=1 f_sat=5 r_ref=10000 v_supply=5\n"
                           "force,resistance,voltage\n";
  EXPECT_EQ(failing_line(head + "0,20000,5\n0.1,abc,4.9\n"), 4u);
  EXPECT_EQ(failing_line(head + "0,20000\n"), 3u);
  EXPECT_EQ(failing_line("# model r0=20000 bogus=1\nforce,resistance,voltage\n"), 1u);
  EXPECT_EQ(failing_line("# model r0=20000\nf,r,v\n"), 2u);
  std::istringstream no_model("force,resistance,voltage\n0,20000,5\n");
  EXPECT_THROW(read_calibration_csv(no_model), FormatError);
  std::istringstream bad_model("# model r0=-1\nforce,resistance,voltage\n");
  EXPECT_THROW(read_calibration_csv(bad_model), FormatError);
}

TEST(Placement, FourDisjointPatchesAtQuarterTurns)
{
  const NetMesh mesh = build_net(fixture::closed_net());
  SensorPlacement placement;
  placement.ring_lo = 3;
  placement.ring_hi = 5;
  const auto sensors = place_sensors(mesh, placement, {});
  std::set<int> seen;
  for (int k = 0; k < kSensorCount; ++k)
  {
    EXPECT_EQ(sensors[k].id, k + 1);
    EXPECT_EQ(sensors[k].patch_nodes.size(), 9u);
    for (const int node : sensors[k].patch_nodes)
    {
      EXPECT_TRUE(seen.insert(node).second) << "node " << node;
      EXPECT_FALSE(mesh.fixed[node]);
    }
    // Centre column of patch k sits a quarter turn after patch k-1.
    EXPECT_TRUE(std::count(sensors[k].patch_nodes.begin(), sensors[k].patch_nodes.end(),
                           mesh.node(4, k * mesh.segments / kSensorCount)));
  }
}

TEST(Placement, RejectsOverlapAndBadRings)
{
  const NetMesh mesh = build_net(fixture::closed_net());
  SensorPlacement wide;
  wide.half_width = 2;  // 5 columns > 16 / 4
  EXPECT_THROW(place_sensors(mesh, wide, {}), ConstructionError);
  SensorPlacement deep;
  deep.ring_hi = 7;
  EXPECT_THROW(place_sensors(mesh, deep, {}), ConstructionError);

  auto sensors = place_sensors(mesh, {}, {});
  sensors[1].patch_nodes.push_back(sensors[0].patch_nodes.front());
  EXPECT_THROW(validate(sensors, mesh.node_count()), ConstructionError);
  sensors = place_sensors(mesh, {}, {});
  sensors[2].patch_nodes.push_back(static_cast<int>(mesh.node_count()));
  EXPECT_THROW(validate(sensors, mesh.node_count()), ConstructionError);
}

TEST(ReadSensor, NoContactReadsFiveVolts)
{
  const NetMesh mesh = build_net(fixture::closed_net());
  const EquilibriumResult r = solve_equilibrium(mesh, claw_tips(fixture::gripper(), 4.0), nullptr, {});
  for (const SensorSpec& s : place_sensors(mesh, {}, {}))
  {
    const SensorReading reading = read_sensor(s, r);
    EXPECT_EQ(reading.voltage, 5.0);
    EXPECT_EQ(reading.force, 0.0);
  }
}

TEST(ReadSensor, CentredSphereLoadsAllFourEqually)
{
  const NetMesh mesh = build_net(fixture::closed_net());
  ObjectLoad load{fixture::sphere(20.0, -30.0, 0.05), {}, {}};
  const EquilibriumResult r = fixture::close_onto(mesh, load, 1.5);
  SensorPlacement placement;
  placement.ring_lo = placement.ring_hi = 5;
  const auto sensors = place_sensors(mesh, placement, {});
  const SensorReading first = read_sensor(sensors[0], r);
  EXPECT_LT(first.voltage, 5.0);
  for (const SensorSpec& s : sensors)
    EXPECT_NEAR(read_sensor(s, r).voltage, first.voltage, 1e-6);
}

TEST(ReadSensor, OffCentreCapsuleLeavesOneSensorLight)
{
  const Scenario sc = load_scenario(oracle::scenario_path("banana_capsule"));
  const NetMesh mesh = build_net(sc.net);
  ObjectLoad load{*sc.object, sc.contact, sc.coupling};
  const EquilibriumResult r = fixture::close_onto(mesh, load, 1.5);
  const auto sensors = place_sensors(mesh, sc.placement, sc.sensor_model);
  std::array<double, kSensorCount> v{};
  for (int k = 0; k < kSensorCount; ++k)
    v[k] = read_sensor(sensors[k], r).voltage;
  const auto highest = std::max_element(v.begin(), v.end()) - v.begin();
  EXPECT_EQ(highest, 2) << v[0] << ' ' << v[1] << ' ' << v[2] << ' ' << v[3];
  for (int k = 0; k < kSensorCount; ++k)
  {
    if (k != 2)
    {
      EXPECT_LT(v[k], v[2]);
    }
  }
}
