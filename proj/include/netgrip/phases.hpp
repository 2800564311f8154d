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
#include "netgrip/sensing.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netgrip
{

enum class GraspPhase
{
  Approach,
  Closing,
  Hold,
  Opening,
  Released,
};

std::string to_string(GraspPhase phase);
GraspPhase phase_from_string(std::string_view name);

inline constexpr double kBaselineVolts = 5.0;

/// Uniformly sampled voltages, one series per sensor, optional forces.
struct Trace
{
  std::vector<double> t;
  std::array<std::vector<double>, kSensorCount> v;
  std::optional<std::array<std::vector<double>, kSensorCount>> f;

  std::size_t size() const { return t.size(); }
  bool operator==(const Trace&) const = default;
};

/// Throws FormatError on length mismatch, non-increasing or non-uniform
/// timestamps, or voltages outside (0, 5].
void validate(const Trace& trace);

/// Sample step, snapped to 10 significant digits so that shifting every
/// timestamp leaves it unchanged.
double sample_step(const Trace& trace);

struct SegmenterConfig
{
  int window = 5;            // samples in the slope fit
  double eps_base = 0.05;    // V band around the baseline
  double slope_min = 0.01;   // V/s
  double dwell_min = 0.5;    // s
};

void validate(const SegmenterConfig& cfg);

/// Half-open sample range [begin, end). `phase` is empty for the single
/// interval of an untouched sensor.
struct PhaseInterval
{
  std::optional<GraspPhase> phase;
  std::size_t begin = 0;
  std::size_t end = 0;
  double t_begin = 0.0;
  double t_end = 0.0;  // timestamp of the last sample in the interval

  bool operator==(const PhaseInterval&) const = default;
};

struct SensorPhases
{
  bool touched = false;
  bool truncated = false;  // trace ended before Released
  std::vector<PhaseInterval> intervals;

  /// Number of labelled phases; 0 when untouched.
  std::size_t phase_count() const;
  const PhaseInterval* find(GraspPhase phase) const;

  bool operator==(const SensorPhases&) const = default;
};

struct PhaseReport
{
  std::size_t samples = 0;
  double dt = 0.0;
  std::array<SensorPhases, kSensorCount> sensors;

  bool operator==(const PhaseReport&) const = default;
};

/// Batch segmentation. Per sensor: contact region from baseline exit and
/// return, Hold as the longest flat run of at least dwell_min, then each
/// corner refined by a continuous two-piece least-squares fit.
PhaseReport segment(const Trace& trace, const SegmenterConfig& cfg = {});

struct PlateauStats
{
  double mean_voltage = kBaselineVolts;
  double mean_force = 0.0;
  double saturation_fraction = 0.0;

  bool operator==(const PlateauStats&) const = default;
};

/// Untouched sensors give (5 V, 0 N, 0). Touched sensors without a Hold
/// interval give nothing.
std::array<std::optional<PlateauStats>, kSensorCount> plateau_stats(const Trace& trace, const PhaseReport& report,
                                                                    const CalibrationCurve& curve);

/// Accumulates samples; finish() runs the batch algorithm on the buffer.
class StreamingSegmenter
{
public:
  explicit StreamingSegmenter(SegmenterConfig cfg = {});

  void push(double t, const std::array<double, kSensorCount>& volts);
  const Trace& buffer() const { return trace_; }
  PhaseReport finish() const;

private:
  SegmenterConfig cfg_;
  Trace trace_;
};

/// Causal per-sample labels from a trailing-window slope. Used for live
/// display; the batch segmenter remains the reference.
class LivePhaseTracker
{
public:
  LivePhaseTracker(double dt, SegmenterConfig cfg = {});

  std::array<GraspPhase, kSensorCount> push(const std::array<double, kSensorCount>& volts);
  const std::array<GraspPhase, kSensorCount>& current() const { return phase_; }

private:
  double dt_;
  SegmenterConfig cfg_;
  std::array<GraspPhase, kSensorCount> phase_;
  std::array<std::vector<double>, kSensorCount> history_;
  std::array<int, kSensorCount> out_run_{};
  std::array<int, kSensorCount> in_run_{};
};

/// Header `t,v1,v2,v3,v4[,f1,f2,f3,f4]`.
void write_trace_csv(std::ostream& out, const Trace& trace);
Trace read_trace_csv(std::istream& in);

std::string report_to_json(const PhaseReport& report, int indent = 2);
PhaseReport report_from_json(std::string_view text);

}  // namespace netgrip
