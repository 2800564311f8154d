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

#include "netgrip/contact.hpp"
#include "netgrip/linkage.hpp"
#include "netgrip/net.hpp"
#include "netgrip/phases.hpp"
#include "netgrip/sensing.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace netgrip
{

/// Open, close until a sensor crosses the stop level, hold, reopen.
/// The slider starts at travel_max.
struct ThresholdPolicy
{
  double approach_s = 0.5;    // idle time before closing
  double close_speed = 3.0;   // mm/s
  std::optional<double> stop_volts;     // stop when any voltage <= this
  std::optional<double> stop_newtons;   // or when any force >= this
  double hold_s = 1.5;
  double reopen_speed = 6.0;  // mm/s
  double settle_s = 0.5;      // idle time after reopening
};

/// Piecewise-linear slider targets; holds the last value afterwards.
struct ScriptPolicy
{
  std::vector<std::array<double, 2>> waypoints;  // (t s, slider mm), t increasing
};

using ControlPolicy = std::variant<ThresholdPolicy, ScriptPolicy>;

struct Scenario
{
  std::string name;
  LinkageConfig linkage;
  NetBuildParams net;
  std::optional<RigidObject> object;
  ObjectCoupling coupling;
  SensorPlacement placement;
  SensorModel sensor_model;
  ControlPolicy control = ThresholdPolicy{};
  double jog_speed = 6.0;  // mm/s, live commands
  SolverParams solver;
  ContactParams contact;
  SegmenterConfig segmenter;
  double sample_rate = 100.0;  // Hz
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;    // V, Gaussian, clamped to the 5 V rail
};

/// Throws SchemaError naming the offending field.
void validate(const Scenario& scenario);

Scenario scenario_from_json(std::string_view text);
std::string scenario_to_json(const Scenario& scenario, int indent = 2);

/// Throws FormatError if the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

/// Upper bound on the run length, s. Exact for scripts.
double policy_duration(const Scenario& scenario);

}  // namespace netgrip
