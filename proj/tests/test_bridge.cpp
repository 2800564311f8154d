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

#include "netgrip/bridge.hpp"
#include "netgrip/mesh_io.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <future>
#include <optional>
#include <thread>

using namespace netgrip;
using nlohmann::json;

namespace
{

/// Blocking line client for the serve protocol.
class Client
{
public:
  explicit Client(int port)
    : fd_(::socket(AF_INET, SOCK_STREAM, 0))
  {
    sockaddr_in address{};
    address.sin_family = AF_INET;
    address.sin_port = htons(static_cast<std::uint16_t>(port));
    ::inet_pton(AF_INET, "127.0.0.1", &address.sin_addr);
    connected_ = ::connect(fd_, reinterpret_cast<sockaddr*>(&address), sizeof address) == 0;
  }
  ~Client() { close(); }

  bool connected() const { return connected_; }

  void send(const std::string& line)
  {
    const std::string text = line + "\n";
    ASSERT_EQ(::send(fd_, text.data(), text.size(), MSG_NOSIGNAL), static_cast<ssize_t>(text.size()));
  }

  std::optional<json> next(std::chrono::milliseconds timeout = std::chrono::milliseconds(5000))
  {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true)
    {
      const auto newline = buffer_.find('\n');
      if (newline != std::string::npos)
      {
        const std::string line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        return json::parse(line);
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0)
        return std::nullopt;
      pollfd p{fd_, POLLIN, 0};
      if (::poll(&p, 1, static_cast<int>(left.count())) <= 0)
        return std::nullopt;
      char chunk[4096];
      const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n <= 0)
        return std::nullopt;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  /// Next message of the given type, skipping others.
  std::optional<json> next_of(const std::string& type)
  {
    for (int i = 0; i < 100000; ++i)
    {
      auto message = next();
      if (!message || message->at("type") == type)
        return message;
    }
    return std::nullopt;
  }

  void close()
  {
    if (fd_ >= 0)
      ::close(fd_);
    fd_ = -1;
  }

private:
  int fd_;
  bool connected_ = false;
  std::string buffer_;
};

struct Server
{
  std::future<void> done;
  int port = 0;

  explicit Server(const Scenario& scenario)
  {
    auto listening = std::make_shared<std::promise<int>>();
    std::future<int> bound = listening->get_future();
    ServeOptions options;
    options.port = 0;
    options.on_listening = [listening](int p) { listening->set_value(p); };
    done = std::async(std::launch::async, [scenario, options] { serve(scenario, options); });
    port = bound.get();
  }
};

}  // namespace

TEST(WireProtocol, TelemetryEncodesEveryField)
{
  TelemetryFrame f;
  f.t = 1.25;
  f.slider = 3.5;
  f.aperture = 50.0;
  f.voltages = {5.0, 4.5, 3.25, 2.0};
  f.forces = {0.0, 0.1, 0.5, 1.5};
  f.hold_margin = -0.25;
  f.phases = {GraspPhase::Approach, GraspPhase::Closing, GraspPhase::Hold, GraspPhase::Released};
  f.iterations = 17;
  const json doc = json::parse(encode_event(f));
  EXPECT_EQ(doc.at("type"), "telemetry");
  EXPECT_EQ(doc.at("t"), 1.25);
  EXPECT_EQ(doc.at("slider"), 3.5);
  EXPECT_EQ(doc.at("aperture"), 50.0);
  EXPECT_EQ(doc.at("voltages").get<std::vector<double>>(), (std::vector<double>{5.0, 4.5, 3.25, 2.0}));
  EXPECT_EQ(doc.at("forces").get<std::vector<double>>(), (std::vector<double>{0.0, 0.1, 0.5, 1.5}));
  EXPECT_EQ(doc.at("hold_margin"), -0.25);
  EXPECT_EQ(doc.at("phases"), json({"approach", "closing", "hold", "released"}));
  EXPECT_EQ(doc.at("iterations"), 17);
  EXPECT_EQ(encode_event(f).find('\n'), std::string::npos);
}

TEST(WireProtocol, PhaseNoticeAndErrorMessages)
{
  const json phase = json::parse(encode_event(PhaseEvent{2.0, 3, GraspPhase::Opening}));
  EXPECT_EQ(phase, json({{"type", "phase"}, {"t", 2.0}, {"sensor", 3}, {"phase", "opening"}}));
  const json notice = json::parse(encode_event(Notice{0.5, "line one\nline two"}));
  EXPECT_EQ(notice.at("type"), "notice");
  EXPECT_EQ(notice.at("message"), "line one\nline two");
  EXPECT_EQ(encode_event(Notice{0.5, "a\nb"}).find('\n'), std::string::npos);
  EXPECT_EQ(json::parse(encode_error("bad")), json({{"type", "error"}, {"message", "bad"}}));
}

TEST(WireProtocol, DecodesCommands)
{
  EXPECT_EQ(std::get<JogCommand>(decode_command(R"({"type":"jog","target_mm":4.5})")).target_mm, 4.5);
  EXPECT_TRUE(std::holds_alternative<StopCommand>(decode_command(R"({"type":"stop"})")));
  EXPECT_TRUE(std::holds_alternative<ReopenCommand>(decode_command(R"({"type":"reopen"})")));
  EXPECT_EQ(std::get<SetThresholdCommand>(decode_command(R"({"type":"set_threshold","volts":3})")).volts, 3.0);
}

TEST(WireProtocol, RejectsMalformedCommands)
{
  for (const char* line : {"", "jog 4", "[1,2]", R"({"target_mm":4})", R"({"type":7})", R"({"type":"fly"})",
                           R"({"type":"jog"})", R"({"type":"jog","target_mm":"4"})",
                           R"({"type":"set_threshold","volts":null})"})
    EXPECT_THROW(decode_command(line), FormatError) << line;
}

TEST(MeshFrame, JsonRoundTrip)
{
  const NetMesh mesh = build_net(fixture::closed_net());
  ObjectLoad load{fixture::sphere(20.0, -30.0, 0.05), {}, {}};
  const EquilibriumResult state = fixture::close_onto(mesh, load, 2.0);
  const MeshFrame frame = make_mesh_frame(mesh, state, 1.5, 2.0, aperture(fixture::gripper(), 2.0), load.object);
  EXPECT_EQ(frame.nodes.size(), mesh.node_count());
  EXPECT_EQ(frame.edges.size(), frame.tensions.size());
  EXPECT_EQ(mesh_frame_from_json(mesh_frame_to_json(frame)), frame);
  EXPECT_EQ(mesh_frame_from_json(mesh_frame_to_json(frame, 2)), frame);

  const json doc = json::parse(mesh_frame_to_json(frame));
  EXPECT_EQ(doc.at("nodes").size(), mesh.node_count());
  EXPECT_EQ(doc.at("object").at("shape").at("type"), "sphere");

  const MeshFrame bare = make_mesh_frame(mesh, state, 0.0, 2.0, 50.0, std::nullopt);
  EXPECT_EQ(mesh_frame_from_json(mesh_frame_to_json(bare)), bare);
  EXPECT_THROW(mesh_frame_from_json("{}"), FormatError);
}

TEST(Serve, StreamsTelemetryAndTakesCommands)
{
  Server server(load_scenario(oracle::scenario_path("empty")));
  Client client(server.port);
  ASSERT_TRUE(client.connected());

  for (int i = 0; i < 10; ++i)
  {
    const auto frame = client.next_of("telemetry");
    ASSERT_TRUE(frame.has_value());
    EXPECT_EQ(frame->at("voltages")[0], 5.0);
  }

  client.send(R"({"type":"jog","target_mm":0})");
  double slider = 9.0;
  for (int i = 0; i < 2000 && slider > 0.0; ++i)
  {
    const auto frame = client.next_of("telemetry");
    ASSERT_TRUE(frame.has_value());
    slider = frame->at("slider").get<double>();
  }
  EXPECT_EQ(slider, 0.0);

  client.send("this is not json");
  const auto error = client.next_of("error");
  ASSERT_TRUE(error.has_value());
  EXPECT_NE(error->at("message").get<std::string>().find("JSON"), std::string::npos);
  const auto after = client.next_of("telemetry");
  ASSERT_TRUE(after.has_value());
  EXPECT_EQ(after->at("slider"), 0.0);

  client.send(R"({"type":"jog","target_mm":42})");
  const auto notice = client.next_of("notice");
  ASSERT_TRUE(notice.has_value());
  EXPECT_NE(notice->at("message").get<std::string>().find("outside"), std::string::npos);

  client.close();
  EXPECT_EQ(server.done.wait_for(std::chrono::seconds(10)), std::future_status::ready);
  server.done.get();
}

TEST(Serve, StopCommandHoldsTheSlider)
{
  Server server(load_scenario(oracle::scenario_path("empty")));
  Client client(server.port);
  ASSERT_TRUE(client.connected());
  double slider = 9.0;
  while (slider > 7.0)
    slider = client.next_of("telemetry")->at("slider").get<double>();
  client.send(R"({"type":"stop"})");
  // A few frames may already be in flight.
  for (int i = 0; i < 20; ++i)
    slider = client.next_of("telemetry")->at("slider").get<double>();
  for (int i = 0; i < 20; ++i)
    EXPECT_EQ(client.next_of("telemetry")->at("slider").get<double>(), slider);
  client.close();
  server.done.get();
}

TEST(Serve, BusyPortIsBindError)
{
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in address{};
  address.sin_family = AF_INET;
  address.sin_port = 0;
  ::inet_pton(AF_INET, "127.0.0.1", &address.sin_addr);
  ASSERT_EQ(::bind(fd, reinterpret_cast<sockaddr*>(&address), sizeof address), 0);
  ASSERT_EQ(::listen(fd, 1), 0);
  socklen_t length = sizeof address;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&address), &length);

  ServeOptions options;
  options.port = ntohs(address.sin_port);
  EXPECT_THROW(serve(load_scenario(oracle::scenario_path("empty")), options), BindError);
  options.port = 0;
  options.host = "not-an-address";
  EXPECT_THROW(serve(load_scenario(oracle::scenario_path("empty")), options), BindError);
  ::close(fd);
}
