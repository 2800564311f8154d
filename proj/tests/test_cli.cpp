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

#include "netgrip/mesh_io.hpp"
#include "netgrip/phases.hpp"
#include "netgrip/sensing.hpp"
#include "oracles.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

using namespace netgrip;
using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

/// Fresh scratch directory, removed with the fixture.
class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("netgrip_cli_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  /// Exit status of `netgrip <args>`; stdout and stderr land in the scratch dir.
  int run(const std::string& args)
  {
    const std::string command = std::string("\"") + NETGRIP_CLI + "\" " + args + " > \"" +
                                path("stdout").string() + "\" 2> \"" + path("stderr").string() + "\"";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& file) const
  {
    std::ifstream in(file);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  }

  std::string out() const { return read(path("stdout")); }
  std::string err() const { return read(path("stderr")); }

  void write(const std::string& name, const std::string& text) const
  {
    std::ofstream(path(name)) << text;
  }

  fs::path dir_;
};

std::string quoted(const fs::path& p)
{
  return "\"" + p.string() + "\"";
}

fs::path graspTrace()
{
  return fs::path(NETGRIP_DATA_DIR) / "grasp_trace.csv";
}

}  // namespace

TEST_F(Cli, SimulateWritesAllOutputs)
{
  ASSERT_EQ(run("simulate " + quoted(oracle::scenario_path("sphere_d40")) + " -o " + quoted(path("run"))), 0)
    << err();
  std::ifstream telemetry(path("run") / "telemetry.csv");
  const PhaseReport report = segment(read_trace_csv(telemetry));
  for (const SensorPhases& s : report.sensors)
    EXPECT_EQ(s.phase_count(), 5u);

  const json summary = json::parse(read(path("run") / "summary.json"));
  EXPECT_EQ(summary.at("verdict"), "held");
  EXPECT_NO_THROW(mesh_frame_from_json(read(path("run") / "mesh_final.json")));
  EXPECT_TRUE(fs::exists(path("run") / "frames.csv"));
}

TEST_F(Cli, MissingScenarioIsUsageError)
{
  EXPECT_EQ(run("simulate " + quoted(path("nope.json"))), 1);
}

TEST_F(Cli, SchemaErrorNamesTheField)
{
  std::ifstream in(oracle::scenario_path("empty"));
  json doc = json::parse(in);
  doc["control"]["waypoints"][2][1] = 99.0;
  write("bad.json", doc.dump());
  EXPECT_EQ(run("simulate " + quoted(path("bad.json")) + " -o " + quoted(path("run"))), 1);
  EXPECT_NE(err().find("control.waypoints[2]"), std::string::npos) << err();
}

TEST_F(Cli, PhysicsFailureExitsTwo)
{
  std::ifstream in(oracle::scenario_path("sphere_d40"));
  json doc = json::parse(in);
  doc["object"]["mass"] = 0.0;
  doc["coupling"]["support"] = false;
  doc["coupling"]["max_travel"] = 20.0;
  write("escape.json", doc.dump());
  EXPECT_EQ(run("simulate " + quoted(path("escape.json")) + " -o " + quoted(path("run"))), 2);
  EXPECT_NE(err().find("left the net"), std::string::npos) << err();
}

TEST_F(Cli, SegmentFindsFivePhases)
{
  ASSERT_EQ(run("segment " + quoted(graspTrace())), 0) << err();
  const PhaseReport report = report_from_json(out());
  ASSERT_EQ(report.sensors.size(), 4u);
  for (const SensorPhases& s : report.sensors)
  {
    EXPECT_TRUE(s.touched);
    EXPECT_EQ(s.phase_count(), 5u);
  }

  ASSERT_EQ(run("segment " + quoted(graspTrace()) + " -o " + quoted(path("report.json"))), 0);
  EXPECT_EQ(report_from_json(read(path("report.json"))), report);
}

TEST_F(Cli, SegmentUntouchedTrace)
{
  std::ostringstream csv;
  csv << "t,v1,v2,v3,v4\n";
  for (int i = 0; i < 300; ++i)
    csv << i * 0.01 << ",5,5,5,5\n";
  write("flat.csv", csv.str());
  ASSERT_EQ(run("segment " + quoted(path("flat.csv"))), 0) << err();
  for (const SensorPhases& s : report_from_json(out()).sensors)
    EXPECT_FALSE(s.touched);
}

TEST_F(Cli, SegmentTruncatedTrace)
{
  std::ifstream in(graspTrace());
  std::ostringstream head;
  std::string line;
  for (int i = 0; i < 651 && std::getline(in, line); ++i)
    head << line << "\n";
  write("head.csv", head.str());
  ASSERT_EQ(run("segment " + quoted(path("head.csv"))), 0) << err();
  // Cut mid-hold: the report ends in Hold and says so.
  for (const SensorPhases& s : report_from_json(out()).sensors)
  {
    EXPECT_TRUE(s.truncated);
    ASSERT_FALSE(s.intervals.empty());
    EXPECT_EQ(s.intervals.back().phase, GraspPhase::Hold);
  }
}

TEST_F(Cli, MalformedTraceNamesTheLine)
{
  write("bad.csv", "t,v1,v2,v3,v4\n0,5,5,5,5\n0.01,5,five,5,5\n");
  EXPECT_EQ(run("segment " + quoted(path("bad.csv"))), 1);
  EXPECT_NE(err().find("line 3"), std::string::npos) << err();
}

TEST_F(Cli, CalibrateTable)
{
  ASSERT_EQ(run("calibrate"), 0) << err();
  std::istringstream in(out());
  const CalibrationCurve curve = read_calibration_csv(in);
  ASSERT_EQ(curve.rows.size(), 101u);
  EXPECT_EQ(curve.rows.front().voltage, 5.0);
  EXPECT_EQ(curve, make_calibration({}, 10.0, 0.1));

  ASSERT_EQ(run("calibrate --f-max 2 --step 0.5 -o " + quoted(path("cal.csv"))), 0);
  std::ifstream file(path("cal.csv"));
  EXPECT_EQ(read_calibration_csv(file), make_calibration({}, 2.0, 0.5));
}

TEST_F(Cli, BadParametersAreUsageErrors)
{
  EXPECT_EQ(run("calibrate --step 0"), 1);
  EXPECT_EQ(run("calibrate --r-sat 1e9"), 1);
  EXPECT_EQ(run("calibrate --bogus"), 1);
  EXPECT_EQ(run("teleport"), 1);
  EXPECT_EQ(run(""), 1);
}

TEST_F(Cli, ServeOnBusyPort)
{
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in address{};
  address.sin_family = AF_INET;
  ::inet_pton(AF_INET, "127.0.0.1", &address.sin_addr);
  ASSERT_EQ(::bind(fd, reinterpret_cast<sockaddr*>(&address), sizeof address), 0);
  ASSERT_EQ(::listen(fd, 1), 0);
  socklen_t length = sizeof address;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&address), &length);
  const int port = ntohs(address.sin_port);
  EXPECT_EQ(run("serve " + quoted(oracle::scenario_path("empty")) + " -p " + std::to_string(port)), 1);
  ::close(fd);
}
