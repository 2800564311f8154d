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
#include "netgrip/net.hpp"
#include "netgrip/phases.hpp"
#include "netgrip/scenario.hpp"
#include "netgrip/sensing.hpp"

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace netgrip
{

enum class GripOutcome
{
  Held,
  Slips,
  NoGrip
};

std::string to_string(GripOutcome outcome);

struct TelemetryFrame
{
  double t = 0.0;         // s
  double slider = 0.0;    // mm
  double aperture = 0.0;  // mm
  std::array<double, kSensorCount> voltages{};
  std::array<double, kSensorCount> forces{};  // N, true patch load
  double hold_margin = 0.0;                   // N
  std::array<GraspPhase, kSensorCount> phases{};
  int iterations = 0;

  bool operator==(const TelemetryFrame&) const = default;
};

struct RunResult
{
  std::string scenario;
  std::vector<TelemetryFrame> frames;
  PhaseReport report;
  GripOutcome outcome = GripOutcome::NoGrip;
  bool threshold_reached = false;
  std::optional<HoldReport> hold;  // at the end of Hold (threshold) or deepest close (script)
  std::array<std::optional<PlateauStats>, kSensorCount> plateau;
  EquilibriumResult final_state;
  double final_slider = 0.0;
};

/// Equilibrium failure mid-run; carries the frames produced so far.
class RunError : public Error
{
public:
  RunError(const std::string& what, std::vector<TelemetryFrame> frames)
    : Error(what), frames_(std::move(frames))
  {
  }
  const std::vector<TelemetryFrame>& frames() const noexcept { return frames_; }

private:
  std::vector<TelemetryFrame> frames_;
};

/// One quasi-static tick per sample: slider from the policy (or a manual
/// override), warm-started equilibrium, sensor reads, hold margin.
class GripController
{
public:
  explicit GripController(Scenario scenario);

  /// Policy finished and no manual override is active.
  bool done() const;
  TelemetryFrame step();

  void jog(double target_mm);
  void stop();
  void reopen();
  void set_stop_volts(double volts);

  bool manual() const { return manual_; }
  double slider() const { return slider_; }
  const Scenario& scenario() const { return scenario_; }
  const NetMesh& mesh() const { return mesh_; }
  const std::array<SensorSpec, kSensorCount>& sensors() const { return sensors_; }
  const std::vector<TelemetryFrame>& frames() const { return frames_; }
  const EquilibriumResult& state() const { return state_; }

  /// Segments the recorded frames and assembles the result.
  RunResult finish() const;

private:
  enum class Stage
  {
    Approach,
    Closing,
    Holding,
    Reopening,
    Settling,
    Done
  };

  double policy_slider(double t);

  Scenario scenario_;
  NetMesh mesh_;
  std::array<SensorSpec, kSensorCount> sensors_;
  std::optional<ObjectLoad> load_;
  double dt_;
  std::uint64_t tick_ = 0;
  double slider_;
  Stage stage_ = Stage::Approach;
  std::int64_t stage_start_ = 0;  // tick
  bool threshold_reached_ = false;
  bool manual_ = false;
  double manual_target_ = 0.0;
  bool touched_ = false;
  double deepest_slider_;
  std::optional<HoldReport> verdict_report_;
  EquilibriumResult state_;
  bool have_state_ = false;
  FrictionState friction_;
  std::mt19937_64 rng_;
  LivePhaseTracker tracker_;
  std::vector<TelemetryFrame> frames_;
};

/// Runs the policy to completion. Throws RunError on solver failure.
RunResult run_scenario(const Scenario& scenario);

struct JogCommand
{
  double target_mm;
};
struct StopCommand
{
};
struct ReopenCommand
{
};
struct SetThresholdCommand
{
  double volts;
};
using Command = std::variant<JogCommand, StopCommand, ReopenCommand, SetThresholdCommand>;

struct PhaseEvent
{
  double t;
  int sensor;  // 1..4
  GraspPhase phase;
};
struct Notice
{
  double t;
  std::string message;
};
using LiveEvent = std::variant<TelemetryFrame, PhaseEvent, Notice>;

/// GripController behind a command inbox and an event outbox. post() and
/// the poll functions may be called from any thread; tick() belongs to the
/// simulation thread alone.
class LiveController
{
public:
  explicit LiveController(Scenario scenario);

  void post(Command command);
  TelemetryFrame tick();

  std::optional<LiveEvent> poll();
  std::optional<LiveEvent> wait(std::chrono::milliseconds timeout);

  bool policy_done() const { return core_.done(); }
  const GripController& core() const { return core_; }

private:
  void emit(LiveEvent event);
  void apply(const Command& command, double t);

  GripController core_;
  std::array<GraspPhase, kSensorCount> last_phases_;
  bool first_ = true;

  std::mutex inbox_mutex_;
  std::deque<Command> inbox_;
  std::mutex outbox_mutex_;
  std::condition_variable outbox_ready_;
  std::deque<LiveEvent> outbox_;
};

Trace trace_from_frames(const std::vector<TelemetryFrame>& frames);

/// `t,v1..v4,f1..f4`, the trace format.
void write_telemetry_csv(std::ostream& out, const std::vector<TelemetryFrame>& frames);
/// Every frame field, one row per tick.
void write_frames_csv(std::ostream& out, const std::vector<TelemetryFrame>& frames);
std::string summary_json(const RunResult& result, int indent = 2);

}  // namespace netgrip
