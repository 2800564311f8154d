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

#include "netgrip/phases.hpp"

#include "netgrip/csv.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

namespace netgrip
{

namespace
{

constexpr std::array<const char*, 5> kPhaseNames = {"approach", "closing", "hold", "opening", "released"};

double snap_significant(double x)
{
  if (x == 0.0)
    return 0.0;
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(x))));
  const double scale = std::pow(10.0, 9 - exponent);
  return std::round(x * scale) / scale;
}

/// Least-squares slope per sample over v[lo, hi).
double fit_slope(const std::vector<double>& v, std::size_t lo, std::size_t hi)
{
  const std::size_t n = hi - lo;
  if (n < 2)
    return 0.0;
  const double centre = 0.5 * static_cast<double>(n - 1);
  double mean = 0.0;
  for (std::size_t i = lo; i < hi; ++i)
    mean += v[i];
  mean /= static_cast<double>(n);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = lo; i < hi; ++i)
  {
    const double x = static_cast<double>(i - lo) - centre;
    num += x * (v[i] - mean);
    den += x * x;
  }
  return num / den;
}

enum class Hinge
{
  FlatThenRamp,  // y = c + m max(0, i - k)
  RampThenFlat,  // y = c + m min(0, i - k)
};

/// Corner index k in (lo, hi) minimising the residual of a continuous
/// two-piece fit over v[lo, hi). The new phase starts at k.
std::optional<std::size_t> fit_hinge(const std::vector<double>& v, std::size_t lo, std::size_t hi, Hinge kind)
{
  if (hi < lo + 3)
    return std::nullopt;
  std::optional<std::size_t> best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (std::size_t k = lo + 1; k + 1 < hi; ++k)
  {
    double n = 0, sh = 0, shh = 0, sy = 0, shy = 0, syy = 0;
    for (std::size_t i = lo; i < hi; ++i)
    {
      const double d = static_cast<double>(i) - static_cast<double>(k);
      const double h = kind == Hinge::FlatThenRamp ? std::max(0.0, d) : std::min(0.0, d);
      n += 1;
      sh += h;
      shh += h * h;
      sy += v[i];
      shy += h * v[i];
      syy += v[i] * v[i];
    }
    const double det = n * shh - sh * sh;
    if (!(det > 0.0))
      continue;
    const double m = (n * shy - sh * sy) / det;
    const double c = (sy - m * sh) / n;
    const double sse = syy - c * sy - m * shy;
    if (sse < best_sse)
    {
      best_sse = sse;
      best = k;
    }
  }
  return best;
}

struct Cut
{
  GraspPhase phase;
  std::size_t begin;
};

std::vector<PhaseInterval> to_intervals(const std::vector<Cut>& cuts, std::size_t n, const std::vector<double>& t)
{
  std::vector<PhaseInterval> out;
  for (std::size_t i = 0; i < cuts.size(); ++i)
  {
    const std::size_t end = i + 1 < cuts.size() ? cuts[i + 1].begin : n;
    if (end <= cuts[i].begin)
      continue;
    out.push_back({cuts[i].phase, cuts[i].begin, end, t[cuts[i].begin], t[end - 1]});
  }
  return out;
}

SensorPhases segment_sensor(const std::vector<double>& t, const std::vector<double>& v, double dt,
                            const SegmenterConfig& cfg)
{
  const std::size_t n = v.size();
  const std::size_t persist = static_cast<std::size_t>(std::max(1, cfg.window / 2));
  const double threshold = kBaselineVolts - cfg.eps_base;
  auto out_of_band = [&](std::size_t i) { return v[i] < threshold; };

  SensorPhases result;

  std::optional<std::size_t> exit;
  for (std::size_t i = 0, run = 0; i < n; ++i)
  {
    run = out_of_band(i) ? run + 1 : 0;
    if (run == persist)
    {
      exit = i + 1 - persist;
      break;
    }
  }
  if (!exit)
  {
    result.intervals.push_back({std::nullopt, 0, n, t.front(), t.back()});
    return result;
  }
  result.touched = true;

  // Return: an in-band run of `persist` samples, or one reaching the end.
  std::optional<std::size_t> ret;
  for (std::size_t i = *exit, run = 0; i < n; ++i)
  {
    run = out_of_band(i) ? 0 : run + 1;
    if (run == persist || (run > 0 && i + 1 == n))
    {
      ret = i + 1 - run;
      break;
    }
  }
  result.truncated = !ret.has_value();
  const std::size_t contact_end = ret.value_or(n);

  const std::size_t half = static_cast<std::size_t>(cfg.window / 2);
  std::size_t hold_begin = 0;
  std::size_t hold_len = 0;
  for (std::size_t i = *exit, run = 0; i < contact_end; ++i)
  {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    const double slope = fit_slope(v, lo, hi) / dt;
    const bool flat = std::abs(slope) < cfg.slope_min && out_of_band(i);
    run = flat ? run + 1 : 0;
    if (run > hold_len)
    {
      hold_len = run;
      hold_begin = i + 1 - run;
    }
  }
  const bool has_hold = static_cast<double>(hold_len) * dt >= cfg.dwell_min * (1.0 - 1e-9);

  std::vector<Cut> cuts{{GraspPhase::Approach, 0}, {GraspPhase::Closing, *exit}};
  if (has_hold)
  {
    cuts.push_back({GraspPhase::Hold, hold_begin});
    if (hold_begin + hold_len < n)
      cuts.push_back({GraspPhase::Opening, hold_begin + hold_len});
  }
  else if (ret)
  {
    const auto lowest = std::min_element(v.begin() + static_cast<std::ptrdiff_t>(*exit),
                                         v.begin() + static_cast<std::ptrdiff_t>(*ret));
    cuts.push_back({GraspPhase::Opening, static_cast<std::size_t>(lowest - v.begin())});
  }
  if (ret)
    cuts.push_back({GraspPhase::Released, *ret});

  auto coarse = to_intervals(cuts, n, t);
  std::vector<Cut> kept;
  for (const auto& iv : coarse)
    kept.push_back({*iv.phase, iv.begin});

  // Refine each corner between consecutive intervals.
  std::vector<Cut> refined = kept;
  bool ok = true;
  for (std::size_t b = 1; b < coarse.size(); ++b)
  {
    const GraspPhase into = *coarse[b].phase;
    const GraspPhase from = *coarse[b - 1].phase;
    if (from == GraspPhase::Closing && into == GraspPhase::Opening)
      continue;
    const Hinge kind =
      (into == GraspPhase::Closing || into == GraspPhase::Opening) ? Hinge::FlatThenRamp : Hinge::RampThenFlat;
    const std::size_t lo = (coarse[b - 1].begin + coarse[b - 1].end) / 2;
    const std::size_t hi = (coarse[b].begin + coarse[b].end + 1) / 2;
    if (const auto k = fit_hinge(v, lo, hi, kind))
      refined[b].begin = *k;
  }
  for (std::size_t b = 1; b < refined.size(); ++b)
    ok = ok && refined[b].begin > refined[b - 1].begin;
  result.intervals = to_intervals(ok ? refined : kept, n, t);
  return result;
}

}  // namespace

std::string to_string(GraspPhase phase)
{
  return kPhaseNames[static_cast<std::size_t>(phase)];
}

GraspPhase phase_from_string(std::string_view name)
{
  for (std::size_t i = 0; i < kPhaseNames.size(); ++i)
    if (name == kPhaseNames[i])
      return static_cast<GraspPhase>(i);
  throw FormatError("unknown phase '" + std::string(name) + "'");
}

void validate(const Trace& trace)
{
  const std::size_t n = trace.t.size();
  for (const auto& series : trace.v)
    if (series.size() != n)
      throw FormatError("voltage series length differs from timestamps");
  if (trace.f)
    for (const auto& series : *trace.f)
      if (series.size() != n)
        throw FormatError("force series length differs from timestamps");
  for (std::size_t i = 0; i < n; ++i)
  {
    if (!std::isfinite(trace.t[i]))
      throw FormatError("non-finite timestamp", i + 2);
    if (i > 0 && !(trace.t[i] > trace.t[i - 1]))
      throw FormatError("timestamps must be strictly increasing", i + 2);
    for (const auto& series : trace.v)
      if (!(series[i] > 0.0 && series[i] <= kBaselineVolts))
        throw FormatError("voltage outside (0, 5]", i + 2);
  }
  if (n >= 2)
  {
    const double dt = (trace.t.back() - trace.t.front()) / static_cast<double>(n - 1);
    const double tol = 1e-6 * dt + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(trace.t.back());
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(trace.t[i] - trace.t[i - 1] - dt) > tol)
        throw FormatError("timestamps are not uniformly spaced", i + 2);
  }
}

double sample_step(const Trace& trace)
{
  const std::size_t n = trace.size();
  if (n < 2)
    throw InsufficientData("a trace needs at least two samples");
  return snap_significant((trace.t.back() - trace.t.front()) / static_cast<double>(n - 1));
}

void validate(const SegmenterConfig& cfg)
{
  if (cfg.window < 2)
    throw DomainError("segmenter window must be at least 2 samples");
  if (!(cfg.eps_base > 0.0) || !(cfg.slope_min > 0.0) || !(cfg.dwell_min > 0.0))
    throw DomainError("segmenter thresholds must be positive");
}

std::size_t SensorPhases::phase_count() const
{
  return touched ? intervals.size() : 0;
}

const PhaseInterval* SensorPhases::find(GraspPhase phase) const
{
  for (const auto& iv : intervals)
    if (iv.phase == phase)
      return &iv;
  return nullptr;
}

PhaseReport segment(const Trace& trace, const SegmenterConfig& cfg)
{
  validate(cfg);
  validate(trace);
  const double dt = sample_step(trace);
  if (static_cast<double>(trace.size() - 1) * dt < cfg.dwell_min)
    throw InsufficientData("trace is shorter than dwell_min");

  PhaseReport report;
  report.samples = trace.size();
  report.dt = dt;
  for (int k = 0; k < kSensorCount; ++k)
    report.sensors[k] = segment_sensor(trace.t, trace.v[k], dt, cfg);
  return report;
}

std::array<std::optional<PlateauStats>, kSensorCount> plateau_stats(const Trace& trace, const PhaseReport& report,
                                                                    const CalibrationCurve& curve)
{
  if (report.samples != trace.size())
    throw PreconditionError("report does not belong to this trace");
  std::array<std::optional<PlateauStats>, kSensorCount> out;
  for (int k = 0; k < kSensorCount; ++k)
  {
    const auto& sensor = report.sensors[k];
    if (!sensor.touched)
    {
      out[k] = PlateauStats{};
      continue;
    }
    const PhaseInterval* hold = sensor.find(GraspPhase::Hold);
    if (!hold)
      continue;
    const auto& v = trace.v[k];
    const double count = static_cast<double>(hold->end - hold->begin);
    // Offsets from the first sample keep a constant plateau exact.
    const double v0 = v[hold->begin];
    const double f0 = voltage_to_force(curve, v0).force;
    double dv = 0.0, df = 0.0, saturated = 0.0;
    for (std::size_t i = hold->begin; i < hold->end; ++i)
    {
      const ForceEstimate estimate = voltage_to_force(curve, v[i]);
      dv += v[i] - v0;
      df += estimate.force - f0;
      saturated += estimate.saturated ? 1.0 : 0.0;
    }
    out[k] = PlateauStats{v0 + dv / count, f0 + df / count, saturated / count};
  }
  return out;
}

StreamingSegmenter::StreamingSegmenter(SegmenterConfig cfg)
  : cfg_(cfg)
{
  validate(cfg_);
}

void StreamingSegmenter::push(double t, const std::array<double, kSensorCount>& volts)
{
  trace_.t.push_back(t);
  for (int k = 0; k < kSensorCount; ++k)
    trace_.v[k].push_back(volts[k]);
}

PhaseReport StreamingSegmenter::finish() const
{
  return segment(trace_, cfg_);
}

LivePhaseTracker::LivePhaseTracker(double dt, SegmenterConfig cfg)
  : dt_(dt), cfg_(cfg)
{
  validate(cfg_);
  if (!(dt_ > 0.0))
    throw DomainError("sample step must be positive");
  phase_.fill(GraspPhase::Approach);
}

std::array<GraspPhase, kSensorCount> LivePhaseTracker::push(const std::array<double, kSensorCount>& volts)
{
  const int persist = std::max(1, cfg_.window / 2);
  const auto window = static_cast<std::size_t>(cfg_.window);
  const double threshold = kBaselineVolts - cfg_.eps_base;
  for (int k = 0; k < kSensorCount; ++k)
  {
    auto& h = history_[k];
    h.push_back(volts[k]);
    if (h.size() > window)
      h.erase(h.begin());
    const bool out = volts[k] < threshold;
    out_run_[k] = out ? out_run_[k] + 1 : 0;
    in_run_[k] = out ? 0 : in_run_[k] + 1;
    const bool full = h.size() == window;
    const double slope = full ? fit_slope(h, 0, h.size()) / dt_ : 0.0;

    GraspPhase& p = phase_[k];
    switch (p)
    {
    case GraspPhase::Approach:
      if (out_run_[k] >= persist)
        p = GraspPhase::Closing;
      break;
    case GraspPhase::Closing:
      if (in_run_[k] >= persist)
        p = GraspPhase::Released;
      else if (full && std::abs(slope) < cfg_.slope_min && out)
        p = GraspPhase::Hold;
      else if (full && slope > cfg_.slope_min)
        p = GraspPhase::Opening;
      break;
    case GraspPhase::Hold:
      if (in_run_[k] >= persist)
        p = GraspPhase::Released;
      else if (full && slope > cfg_.slope_min)
        p = GraspPhase::Opening;
      break;
    case GraspPhase::Opening:
      if (in_run_[k] >= persist)
        p = GraspPhase::Released;
      break;
    case GraspPhase::Released:
      break;
    }
  }
  return phase_;
}

void write_trace_csv(std::ostream& out, const Trace& trace)
{
  out << "t,v1,v2,v3,v4";
  if (trace.f)
    out << ",f1,f2,f3,f4";
  out << '\n';
  for (std::size_t i = 0; i < trace.size(); ++i)
  {
    out << csv::format(trace.t[i]);
    for (const auto& series : trace.v)
      out << ',' << csv::format(series[i]);
    if (trace.f)
      for (const auto& series : *trace.f)
        out << ',' << csv::format(series[i]);
    out << '\n';
  }
}

Trace read_trace_csv(std::istream& in)
{
  Trace trace;
  std::string line;
  std::size_t number = 0;
  std::size_t columns = 0;
  while (std::getline(in, line))
  {
    ++number;
    const std::string_view text = csv::trim(line);
    if (text.empty() || text.front() == '#')
      continue;
    if (columns == 0)
    {
      if (text == "t,v1,v2,v3,v4")
        columns = 5;
      else if (text == "t,v1,v2,v3,v4,f1,f2,f3,f4")
      {
        columns = 9;
        trace.f.emplace();
      }
      else
        throw FormatError("expected header t,v1,v2,v3,v4[,f1,f2,f3,f4]", number);
      continue;
    }
    const auto fields = csv::split(text);
    if (fields.size() != columns)
      throw FormatError("expected " + std::to_string(columns) + " fields, got " + std::to_string(fields.size()),
                        number);
    const double t = csv::parse(fields[0], number);
    if (!trace.t.empty() && !(t > trace.t.back()))
      throw FormatError("timestamps must be strictly increasing", number);
    trace.t.push_back(t);
    for (int k = 0; k < kSensorCount; ++k)
    {
      const double v = csv::parse(fields[1 + k], number);
      if (!(v > 0.0 && v <= kBaselineVolts))
        throw FormatError("voltage outside (0, 5]", number);
      trace.v[k].push_back(v);
    }
    if (trace.f)
      for (int k = 0; k < kSensorCount; ++k)
        (*trace.f)[k].push_back(csv::parse(fields[5 + k], number));
  }
  if (columns == 0)
    throw FormatError("empty trace file");
  validate(trace);
  return trace;
}

std::string report_to_json(const PhaseReport& report, int indent)
{
  nlohmann::json sensors = nlohmann::json::array();
  for (int k = 0; k < kSensorCount; ++k)
  {
    const auto& s = report.sensors[k];
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& iv : s.intervals)
      intervals.push_back({{"phase", iv.phase ? nlohmann::json(to_string(*iv.phase)) : nlohmann::json(nullptr)},
                           {"begin", iv.begin},
                           {"end", iv.end},
                           {"t_begin", iv.t_begin},
                           {"t_end", iv.t_end}});
    sensors.push_back({{"id", k + 1},
                       {"touched", s.touched},
                       {"truncated", s.truncated},
                       {"phase_count", s.phase_count()},
                       {"intervals", intervals}});
  }
  const nlohmann::json doc{{"samples", report.samples}, {"dt", report.dt}, {"sensors", sensors}};
  return doc.dump(indent);
}

PhaseReport report_from_json(std::string_view text)
{
  try
  {
    const auto doc = nlohmann::json::parse(text);
    PhaseReport report;
    report.samples = doc.at("samples").get<std::size_t>();
    report.dt = doc.at("dt").get<double>();
    const auto& sensors = doc.at("sensors");
    if (sensors.size() != kSensorCount)
      throw FormatError("expected 4 sensors");
    for (int k = 0; k < kSensorCount; ++k)
    {
      const auto& s = sensors[k];
      auto& out = report.sensors[k];
      out.touched = s.at("touched").get<bool>();
      out.truncated = s.at("truncated").get<bool>();
      for (const auto& iv : s.at("intervals"))
      {
        PhaseInterval interval;
        if (!iv.at("phase").is_null())
          interval.phase = phase_from_string(iv.at("phase").get<std::string>());
        interval.begin = iv.at("begin").get<std::size_t>();
        interval.end = iv.at("end").get<std::size_t>();
        interval.t_begin = iv.at("t_begin").get<double>();
        interval.t_end = iv.at("t_end").get<double>();
        out.intervals.push_back(interval);
      }
    }
    return report;
  }
  catch (const nlohmann::json::exception& e)
  {
    throw FormatError(std::string("phase report: ") + e.what());
  }
}

}  // namespace netgrip
