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

// netgrip command-line entry point.
//
//   netgrip simulate  <scenario.json> --out DIR
//   netgrip segment   <trace.csv> [--out report.json]
//   netgrip calibrate [--f-max N --step N ...] [--out table.csv]
//   netgrip serve     <scenario.json> [--port P]
//
// Exit codes: 0 success, 1 usage or format error, 2 physics failure.

#include "netgrip/bridge.hpp"
#include "netgrip/controller.hpp"
#include "netgrip/mesh_io.hpp"
#include "netgrip/phases.hpp"
#include "netgrip/scenario.hpp"
#include "netgrip/sensing.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace netgrip;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPhysics = 2;

struct SimulateArgs
{
  std::string scenario;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> sample_rate;
  std::optional<double> stop_volts;
  std::optional<double> noise;
};

struct SegmentArgs
{
  std::string trace;
  std::string out;
  SegmenterConfig cfg;
};

struct CalibrateArgs
{
  SensorModel model;
  double f_max = 10.0;
  double step = 0.1;
  std::string out;
};

struct ServeArgs
{
  std::string scenario;
  int port = 8765;
  bool fast = false;
};

void write_file(const fs::path& path, const std::string& text)
{
  std::ofstream out(path);
  if (!out)
    throw FormatError("cannot write " + path.string());
  out << text;
}

void write_frames(const fs::path& dir, const std::vector<TelemetryFrame>& frames)
{
  std::ofstream telemetry(dir / "telemetry.csv");
  write_telemetry_csv(telemetry, frames);
  std::ofstream all(dir / "frames.csv");
  write_frames_csv(all, frames);
}

int run_simulate(const SimulateArgs& args)
{
  Scenario scenario = load_scenario(args.scenario);
  if (args.seed)
    scenario.seed = *args.seed;
  if (args.sample_rate)
    scenario.sample_rate = *args.sample_rate;
  if (args.noise)
    scenario.noise_sigma = *args.noise;
  if (args.stop_volts)
  {
    auto* policy = std::get_if<ThresholdPolicy>(&scenario.control);
    if (!policy)
      throw SchemaError("control", "--stop-volts needs a threshold policy");
    policy->stop_volts = *args.stop_volts;
    policy->stop_newtons.reset();
  }
  validate(scenario);

  const fs::path dir(args.out_dir);
  fs::create_directories(dir);
  try
  {
    GripController controller(scenario);
    while (!controller.done())
      controller.step();
    const RunResult result = controller.finish();
    write_frames(dir, result.frames);
    write_file(dir / "summary.json", summary_json(result) + "\n");
    const auto& last = result.frames.back();
    write_file(dir / "mesh_final.json",
               mesh_frame_to_json(make_mesh_frame(controller.mesh(), result.final_state, last.t, last.slider,
                                                  last.aperture, scenario.object, scenario.solver.tension_only)) +
                 "\n");
    std::cout << scenario.name << ": " << to_string(result.outcome) << ", " << result.frames.size()
              << " frames -> " << dir.string() << "\n";
    return kExitOk;
  }
  catch (const RunError& e)
  {
    write_frames(dir, e.frames());
    std::cerr << "physics failure: " << e.what() << " (" << e.frames().size() << " frames written)\n";
    return kExitPhysics;
  }
}

int run_segment(const SegmentArgs& args)
{
  std::ifstream in(args.trace);
  if (!in)
    throw FormatError("cannot read trace " + args.trace);
  const Trace trace = read_trace_csv(in);
  const PhaseReport report = segment(trace, args.cfg);
  const std::string text = report_to_json(report) + "\n";
  if (args.out.empty())
    std::cout << text;
  else
    write_file(args.out, text);
  return kExitOk;
}

int run_calibrate(const CalibrateArgs& args)
{
  const CalibrationCurve curve = make_calibration(args.model, args.f_max, args.step);
  if (args.out.empty())
    write_calibration_csv(std::cout, curve);
  else
  {
    std::ofstream out(args.out);
    if (!out)
      throw FormatError("cannot write " + args.out);
    write_calibration_csv(out, curve);
  }
  return kExitOk;
}

int run_serve(const ServeArgs& args)
{
  const Scenario scenario = load_scenario(args.scenario);
  ServeOptions options;
  options.port = args.port;
  options.realtime = !args.fast;
  options.on_listening = [](int port) { std::cerr << "listening on 127.0.0.1:" << port << "\n"; };
  serve(scenario, options);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Net gripper simulator and grasp-trace tools"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario; write telemetry, summary and final mesh");
  simulate->add_option("scenario", sim.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("-o,--out", sim.out_dir, "Output directory");
  simulate->add_option("--seed", sim.seed, "Noise seed override");
  simulate->add_option("--sample-rate", sim.sample_rate, "Sample rate override, Hz");
  simulate->add_option("--stop-volts", sim.stop_volts, "Threshold stop level override, V");
  simulate->add_option("--noise", sim.noise, "Voltage noise sigma override, V");

  SegmentArgs seg;
  auto* segment_cmd = app.add_subcommand("segment", "Split a trace CSV into grasp phases");
  segment_cmd->add_option("trace", seg.trace, "Trace CSV (t,v1..v4[,f1..f4])")->required()->check(CLI::ExistingFile);
  segment_cmd->add_option("-o,--out", seg.out, "Report JSON (default stdout)");
  segment_cmd->add_option("--window", seg.cfg.window, "Slope window, samples");
  segment_cmd->add_option("--eps", seg.cfg.eps_base, "Baseline band, V");
  segment_cmd->add_option("--slope-min", seg.cfg.slope_min, "Flat-slope limit, V/s");
  segment_cmd->add_option("--dwell", seg.cfg.dwell_min, "Minimum hold, s");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Tabulate the sensor force-resistance-voltage curve");
  calibrate->add_option("--f-max", cal.f_max, "Largest force, N");
  calibrate->add_option("--step", cal.step, "Force step, N");
  calibrate->add_option("--r0", cal.model.r0, "Unloaded resistance, ohm");
  calibrate->add_option("--r-sat", cal.model.r_sat, "Saturated resistance, ohm");
  calibrate->add_option("--f-c", cal.model.f_c, "Force scale, N");
  calibrate->add_option("--f-sat", cal.model.f_sat, "Saturation force, N");
  calibrate->add_option("--r-ref", cal.model.r_ref, "Divider reference, ohm");
  calibrate->add_option("--v-supply", cal.model.v_supply, "Supply voltage, V");
  calibrate->add_option("-o,--out", cal.out, "Output CSV (default stdout)");

  ServeArgs srv;
  auto* serve_cmd = app.add_subcommand("serve", "Stream a live scenario over NDJSON on a local socket");
  serve_cmd->add_option("scenario", srv.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("-p,--port", srv.port, "TCP port on 127.0.0.1")->check(CLI::Range(0, 65535));
  serve_cmd->add_flag("--fast", srv.fast, "Do not pace ticks to the sample rate");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try
  {
    if (*simulate)
      return run_simulate(sim);
    if (*segment_cmd)
      return run_segment(seg);
    if (*calibrate)
      return run_calibrate(cal);
    return run_serve(srv);
  }
  catch (const SchemaError& e)
  {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitUsage;
  }
  catch (const FormatError& e)
  {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitUsage;
  }
  catch (const BindError& e)
  {
    std::cerr << "serve: " << e.what() << "\n";
    return kExitUsage;
  }
  catch (const InsufficientData& e)
  {
    std::cerr << "insufficient data: " << e.what() << "\n";
    return kExitUsage;
  }
  catch (const DomainError& e)
  {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  }
  catch (const ConstructionError& e)
  {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  }
  catch (const Error& e)
  {
    std::cerr << "physics failure: " << e.what() << "\n";
    return kExitPhysics;
  }
}
