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

#include "netgrip/controller.hpp"

#include "netgrip/csv.hpp"
#include "netgrip/linkage.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace netgrip
{

namespace
{

std::int64_t ticks_for(double seconds, double rate)
{
  return static_cast<std::int64_t>(std::llround(seconds * rate));
}

double script_slider(const ScriptPolicy& script, double t)
{
  const auto& w = script.waypoints;
  if (t <= w.front()[0])
    return w.front()[1];
  for (std::size_t i = 1; i < w.size(); ++i)
    if (t <= w[i][0])
    {
      const double u = (t - w[i - 1][0]) / (w[i][0] - w[i - 1][0]);
      return w[i - 1][1] + u * (w[i][1] - w[i - 1][1]);
    }
  return w.back()[1];
}

double step_toward(double from, double to, double max_step)
{
  if (std::abs(to - from) <= max_step)
    return to;
  return to > from ? from + max_step : from - max_step;
}

/// Largest force the plateau statistics are tabulated to.
constexpr double kCalibrationSpan = 10.0;
constexpr double kCalibrationStep = 0.1;

}  // namespace

std::string to_string(GripOutcome outcome)
{
  switch (outcome)
  {
  case GripOutcome::Held:
    return "held";
  case GripOutcome::Slips:
    return "slips";
  case GripOutcome::NoGrip:
    return "no_grip";
  }
  return "no_grip";
}

GripController::GripController(Scenario scenario)
  : scenario_(std::move(scenario)),
    mesh_(),
    dt_(0.0),
    slider_(0.0),
    deepest_slider_(0.0),
    rng_(0),
    tracker_(1.0)
{
  validate(scenario_);
  mesh_ = build_net(scenario_.net);
  sensors_ = place_sensors(mesh_, scenario_.placement, scenario_.sensor_model);
  if (scenario_.object)
    load_ = ObjectLoad{*scenario_.object, scenario_.contact, scenario_.coupling};
  dt_ = 1.0 / scenario_.sample_rate;
  slider_ = scenario_.linkage.travel_max;
  deepest_slider_ = slider_;
  manual_target_ = slider_;
  rng_.seed(scenario_.seed);
  tracker_ = LivePhaseTracker(dt_, scenario_.segmenter);
  if (std::holds_alternative<ScriptPolicy>(scenario_.control))
    slider_ = script_slider(std::get<ScriptPolicy>(scenario_.control), 0.0);
}

bool GripController::done() const
{
  return stage_ == Stage::Done && !manual_;
}

void GripController::jog(double target_mm)
{
  if (!(target_mm >= 0.0 && target_mm <= scenario_.linkage.travel_max))
    throw DomainError("jog target " + csv::format(target_mm) + " mm outside [0, " +
                      csv::format(scenario_.linkage.travel_max) + "] mm");
  manual_ = true;
  manual_target_ = target_mm;
}

void GripController::stop()
{
  manual_ = true;
  manual_target_ = slider_;
}

void GripController::reopen()
{
  manual_ = true;
  manual_target_ = scenario_.linkage.travel_max;
}

void GripController::set_stop_volts(double volts)
{
  auto* policy = std::get_if<ThresholdPolicy>(&scenario_.control);
  if (!policy)
    throw DomainError("scenario has no threshold policy");
  if (!(volts > 0.0 && volts < scenario_.sensor_model.v_supply))
    throw DomainError("stop level " + csv::format(volts) + " V outside (0, " +
                      csv::format(scenario_.sensor_model.v_supply) + ") V");
  policy->stop_volts = volts;
  policy->stop_newtons.reset();
}

double GripController::policy_slider(double t)
{
  if (const auto* script = std::get_if<ScriptPolicy>(&scenario_.control))
    return script_slider(*script, t);

  const auto& p = std::get<ThresholdPolicy>(scenario_.control);
  const double travel = scenario_.linkage.travel_max;
  const auto tick = static_cast<std::int64_t>(tick_);
  if (stage_ == Stage::Approach && tick >= ticks_for(p.approach_s, scenario_.sample_rate))
  {
    stage_ = Stage::Closing;
    stage_start_ = tick;
  }
  switch (stage_)
  {
  case Stage::Approach:
    return travel;
  case Stage::Closing:
    return std::max(0.0, slider_ - p.close_speed * dt_);
  case Stage::Reopening:
    return std::min(travel, slider_ + p.reopen_speed * dt_);
  default:
    return slider_;
  }
}

TelemetryFrame GripController::step()
{
  const double t = static_cast<double>(tick_) / scenario_.sample_rate;
  if (manual_)
    slider_ = step_toward(slider_, manual_target_, scenario_.jog_speed * dt_);
  else
    slider_ = policy_slider(t);

  const auto targets = claw_tips(scenario_.linkage, slider_);
  EquilibriumResult result;
  try
  {
    result = solve_equilibrium(mesh_, targets, load_ ? &*load_ : nullptr, scenario_.solver,
                               have_state_ ? &state_.positions : nullptr, load_ ? &friction_ : nullptr,
                               have_state_ ? state_.object_offset : Vec3::Zero());
  }
  catch (const Error& e)
  {
    throw RunError("t = " + csv::format(t) + " s, slider " + csv::format(slider_) + " mm: " + e.what(), frames_);
  }
  if (load_)
    update_friction(friction_, result.positions, load_->object, load_->contact, result.object_offset);
  state_ = std::move(result);
  have_state_ = true;

  TelemetryFrame frame;
  frame.t = t;
  frame.slider = slider_;
  frame.aperture = aperture(scenario_.linkage, slider_);
  const double rail = scenario_.sensor_model.v_supply;
  for (int k = 0; k < kSensorCount; ++k)
  {
    const SensorReading reading = read_sensor(sensors_[k], state_);
    double v = reading.voltage;
    if (scenario_.noise_sigma > 0.0)
    {
      std::normal_distribution<double> noise(0.0, scenario_.noise_sigma);
      v = std::clamp(v + noise(rng_), 1e-3, rail);
    }
    frame.voltages[k] = v;
    frame.forces[k] = reading.force;
  }
  std::optional<HoldReport> hold;
  if (load_)
  {
    hold = hold_check(state_, load_->object, load_->contact);
    frame.hold_margin = hold->margin;
    if (total_normal_force(state_) > 0.0)
      touched_ = true;
  }
  frame.phases = tracker_.push(frame.voltages);
  frame.iterations = state_.iterations;

  // Policy transitions for the next tick.
  if (!manual_)
  {
    if (const auto* p = std::get_if<ThresholdPolicy>(&scenario_.control))
    {
      const auto tick = static_cast<std::int64_t>(tick_);
      const double rate = scenario_.sample_rate;
      if (stage_ == Stage::Closing)
      {
        const double stop_level =
          p->stop_volts ? *p->stop_volts : force_to_voltage(scenario_.sensor_model, *p->stop_newtons);
        const bool crossed = std::any_of(frame.voltages.begin(), frame.voltages.end(),
                                         [&](double v) { return v <= stop_level; });
        if (crossed)
          threshold_reached_ = true;
        if (crossed || slider_ <= 0.0)
        {
          stage_ = Stage::Holding;
          stage_start_ = tick + 1;
        }
      }
      else if (stage_ == Stage::Holding)
      {
        if (tick + 1 - stage_start_ >= ticks_for(p->hold_s, rate))
        {
          verdict_report_ = hold;
          stage_ = Stage::Reopening;
        }
      }
      else if (stage_ == Stage::Reopening && slider_ >= scenario_.linkage.travel_max)
      {
        stage_ = Stage::Settling;
        stage_start_ = tick + 1;
      }
      if (stage_ == Stage::Settling &&
          tick + 1 - stage_start_ >= ticks_for(p->settle_s, rate))
        stage_ = Stage::Done;
    }
    else
    {
      const auto& script = std::get<ScriptPolicy>(scenario_.control);
      if (slider_ <= deepest_slider_)
      {
        deepest_slider_ = slider_;
        verdict_report_ = hold;
      }
      if (t >= script.waypoints.back()[0])
        stage_ = Stage::Done;
    }
  }

  frames_.push_back(frame);
  ++tick_;
  return frame;
}

RunResult GripController::finish() const
{
  RunResult out;
  out.scenario = scenario_.name;
  out.frames = frames_;
  out.final_state = state_;
  out.final_slider = slider_;
  out.threshold_reached = threshold_reached_;
  out.hold = verdict_report_;

  const Trace trace = trace_from_frames(frames_);
  out.report = segment(trace, scenario_.segmenter);
  const auto curve = make_calibration(scenario_.sensor_model,
                                      std::max(kCalibrationSpan, scenario_.sensor_model.f_sat), kCalibrationStep);
  out.plateau = plateau_stats(trace, out.report, curve);

  const bool threshold_policy = std::holds_alternative<ThresholdPolicy>(scenario_.control);
  if (!load_ || !touched_ || !verdict_report_ || (threshold_policy && !threshold_reached_))
    out.outcome = GripOutcome::NoGrip;
  else
    out.outcome = verdict_report_->verdict == HoldVerdict::Held ? GripOutcome::Held : GripOutcome::Slips;
  return out;
}

RunResult run_scenario(const Scenario& scenario)
{
  GripController controller(scenario);
  while (!controller.done())
    controller.step();
  return controller.finish();
}

LiveController::LiveController(Scenario scenario)
  : core_(std::move(scenario))
{
  last_phases_.fill(GraspPhase::Approach);
}

void LiveController::post(Command command)
{
  std::lock_guard lock(inbox_mutex_);
  inbox_.push_back(std::move(command));
}

void LiveController::emit(LiveEvent event)
{
  {
    std::lock_guard lock(outbox_mutex_);
    outbox_.push_back(std::move(event));
  }
  outbox_ready_.notify_one();
}

void LiveController::apply(const Command& command, double t)
{
  try
  {
    std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, JogCommand>)
          core_.jog(c.target_mm);
        else if constexpr (std::is_same_v<T, StopCommand>)
          core_.stop();
        else if constexpr (std::is_same_v<T, ReopenCommand>)
          core_.reopen();
        else
          core_.set_stop_volts(c.volts);
      },
      command);
  }
  catch (const DomainError& e)
  {
    emit(Notice{t, std::string(e.what()) + "; ignored"});
  }
}

TelemetryFrame LiveController::tick()
{
  std::deque<Command> pending;
  {
    std::lock_guard lock(inbox_mutex_);
    pending.swap(inbox_);
  }
  const double t = static_cast<double>(core_.frames().size()) / core_.scenario().sample_rate;
  for (const auto& command : pending)
    apply(command, t);

  const TelemetryFrame frame = core_.step();
  emit(frame);
  for (int k = 0; k < kSensorCount; ++k)
    if (first_ || frame.phases[k] != last_phases_[k])
      emit(PhaseEvent{frame.t, k + 1, frame.phases[k]});
  last_phases_ = frame.phases;
  first_ = false;
  return frame;
}

std::optional<LiveEvent> LiveController::poll()
{
  std::lock_guard lock(outbox_mutex_);
  if (outbox_.empty())
    return std::nullopt;
  LiveEvent event = std::move(outbox_.front());
  outbox_.pop_front();
  return event;
}

std::optional<LiveEvent> LiveController::wait(std::chrono::milliseconds timeout)
{
  std::unique_lock lock(outbox_mutex_);
  if (!outbox_ready_.wait_for(lock, timeout, [&] { return !outbox_.empty(); }))
    return std::nullopt;
  LiveEvent event = std::move(outbox_.front());
  outbox_.pop_front();
  return event;
}

Trace trace_from_frames(const std::vector<TelemetryFrame>& frames)
{
  Trace trace;
  trace.f.emplace();
  for (const auto& frame : frames)
  {
    trace.t.push_back(frame.t);
    for (int k = 0; k < kSensorCount; ++k)
    {
      trace.v[k].push_back(frame.voltages[k]);
      (*trace.f)[k].push_back(frame.forces[k]);
    }
  }
  return trace;
}

void write_telemetry_csv(std::ostream& out, const std::vector<TelemetryFrame>& frames)
{
  write_trace_csv(out, trace_from_frames(frames));
}

void write_frames_csv(std::ostream& out, const std::vector<TelemetryFrame>& frames)
{
  out << "t,slider,aperture,v1,v2,v3,v4,f1,f2,f3,f4,hold_margin,phase1,phase2,phase3,phase4,iterations\n";
  for (const auto& f : frames)
  {
    out << csv::format(f.t) << ',' << csv::format(f.slider) << ',' << csv::format(f.aperture);
    for (const double v : f.voltages)
      out << ',' << csv::format(v);
    for (const double x : f.forces)
      out << ',' << csv::format(x);
    out << ',' << csv::format(f.hold_margin);
    for (const auto p : f.phases)
      out << ',' << to_string(p);
    out << ',' << f.iterations << '\n';
  }
}

std::string summary_json(const RunResult& result, int indent)
{
  using nlohmann::json;
  json plateau = json::array();
  for (int k = 0; k < kSensorCount; ++k)
  {
    const auto& sensor = result.report.sensors[k];
    json entry{{"id", k + 1}, {"touched", sensor.touched}, {"phase_count", sensor.phase_count()}};
    if (const auto& stats = result.plateau[k])
    {
      entry["mean_voltage"] = stats->mean_voltage;
      entry["mean_force"] = stats->mean_force;
      entry["saturation_fraction"] = stats->saturation_fraction;
    }
    else
    {
      entry["mean_voltage"] = nullptr;
      entry["mean_force"] = nullptr;
      entry["saturation_fraction"] = nullptr;
    }
    plateau.push_back(entry);
  }
  json doc{{"scenario", result.scenario},
           {"verdict", to_string(result.outcome)},
           {"threshold_reached", result.threshold_reached},
           {"frames", result.frames.size()},
           {"final_slider", result.final_slider},
           {"plateau", plateau},
           {"report", json::parse(report_to_json(result.report, -1))}};
  if (result.hold)
    doc["hold"] = {{"margin", result.hold->margin},
                   {"normal_support", result.hold->normal_support},
                   {"friction_budget", result.hold->friction_budget},
                   {"weight", result.hold->weight}};
  else
    doc["hold"] = nullptr;
  return doc.dump(indent);
}

}  // namespace netgrip
