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

#include "json.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <thread>

namespace netgrip
{

namespace
{

using nlohmann::json;

/// Closes the descriptor on scope exit.
class Socket
{
public:
  explicit Socket(int fd = -1)
    : fd_(fd)
  {
  }
  ~Socket()
  {
    if (fd_ >= 0)
      ::close(fd_);
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  int get() const { return fd_; }

private:
  int fd_;
};

bool send_all(int fd, const std::string& text)
{
  std::size_t sent = 0;
  while (sent < text.size())
  {
    const ssize_t n = ::send(fd, text.data() + sent, text.size() - sent, MSG_NOSIGNAL);
    if (n < 0)
    {
      if (errno == EINTR)
        continue;
      return false;
    }
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

json phases_json(const std::array<GraspPhase, kSensorCount>& phases)
{
  json out = json::array();
  for (const auto p : phases)
    out.push_back(to_string(p));
  return out;
}

}  // namespace

std::string encode_event(const LiveEvent& event)
{
  json doc = std::visit(
    [](const auto& e) -> json {
      using T = std::decay_t<decltype(e)>;
      if constexpr (std::is_same_v<T, TelemetryFrame>)
        return {{"type", "telemetry"},
                {"t", e.t},
                {"slider", e.slider},
                {"aperture", e.aperture},
                {"voltages", e.voltages},
                {"forces", e.forces},
                {"hold_margin", e.hold_margin},
                {"phases", phases_json(e.phases)},
                {"iterations", e.iterations}};
      else if constexpr (std::is_same_v<T, PhaseEvent>)
        return {{"type", "phase"}, {"t", e.t}, {"sensor", e.sensor}, {"phase", to_string(e.phase)}};
      else
        return {{"type", "notice"}, {"t", e.t}, {"message", e.message}};
    },
    event);
  return doc.dump();
}

std::string encode_error(std::string_view message)
{
  return json{{"type", "error"}, {"message", std::string(message)}}.dump();
}

Command decode_command(std::string_view line)
{
  json doc;
  try
  {
    doc = json::parse(line);
  }
  catch (const json::parse_error&)
  {
    throw FormatError("command is not valid JSON");
  }
  if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string())
    throw FormatError("command needs a string \"type\"");
  const std::string type = doc.at("type").get<std::string>();
  auto number = [&](const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_number())
      throw FormatError(type + " needs a numeric \"" + key + "\"");
    const double x = doc.at(key).get<double>();
    if (!std::isfinite(x))
      throw FormatError(std::string(key) + " must be finite");
    return x;
  };
  if (type == "jog")
    return JogCommand{number("target_mm")};
  if (type == "stop")
    return StopCommand{};
  if (type == "reopen")
    return ReopenCommand{};
  if (type == "set_threshold")
    return SetThresholdCommand{number("volts")};
  throw FormatError("unknown command type '" + type + "'");
}

void serve(const Scenario& scenario, const ServeOptions& options)
{
  Socket listener(::socket(AF_INET, SOCK_STREAM, 0));
  if (listener.get() < 0)
    throw BindError(std::string("socket: ") + std::strerror(errno));
  const int yes = 1;
  ::setsockopt(listener.get(), SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);

  sockaddr_in address{};
  address.sin_family = AF_INET;
  address.sin_port = htons(static_cast<std::uint16_t>(options.port));
  if (::inet_pton(AF_INET, options.host.c_str(), &address.sin_addr) != 1)
    throw BindError("bad host address " + options.host);
  if (::bind(listener.get(), reinterpret_cast<sockaddr*>(&address), sizeof address) != 0)
    throw BindError("cannot bind " + options.host + ":" + std::to_string(options.port) + ": " +
                    std::strerror(errno));
  if (::listen(listener.get(), 1) != 0)
    throw BindError(std::string("listen: ") + std::strerror(errno));
  socklen_t length = sizeof address;
  ::getsockname(listener.get(), reinterpret_cast<sockaddr*>(&address), &length);
  if (options.on_listening)
    options.on_listening(ntohs(address.sin_port));

  Socket client(::accept(listener.get(), nullptr, nullptr));
  if (client.get() < 0)
    throw Error(std::string("accept: ") + std::strerror(errno));

  LiveController live(scenario);
  std::atomic<bool> stopping{false};
  std::mutex fatal_mutex;
  std::string fatal;

  std::thread simulation([&] {
    const auto period = std::chrono::duration<double>(1.0 / scenario.sample_rate);
    auto next = std::chrono::steady_clock::now();
    while (!stopping.load())
    {
      try
      {
        live.tick();
      }
      catch (const Error& e)
      {
        std::lock_guard lock(fatal_mutex);
        fatal = e.what();
        stopping.store(true);
        break;
      }
      if (options.realtime)
      {
        next += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
        std::this_thread::sleep_until(next);
      }
    }
  });

  std::string pending;
  char buffer[4096];
  bool open = true;
  while (open)
  {
    pollfd fd{client.get(), POLLIN, 0};
    if (::poll(&fd, 1, 5) > 0)
    {
      const ssize_t n = ::recv(client.get(), buffer, sizeof buffer, 0);
      if (n <= 0)
        break;
      pending.append(buffer, static_cast<std::size_t>(n));
      std::size_t newline;
      while ((newline = pending.find('\n')) != std::string::npos)
      {
        const std::string line = pending.substr(0, newline);
        pending.erase(0, newline + 1);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
          continue;
        try
        {
          live.post(decode_command(line));
        }
        catch (const FormatError& e)
        {
          open = open && send_all(client.get(), encode_error(e.what()) + "\n");
        }
      }
    }
    while (open)
    {
      const auto event = live.poll();
      if (!event)
        break;
      open = send_all(client.get(), encode_event(*event) + "\n");
    }
    if (stopping.load())
    {
      std::lock_guard lock(fatal_mutex);
      if (!fatal.empty())
        send_all(client.get(), encode_error(fatal) + "\n");
      break;
    }
  }
  stopping.store(true);
  simulation.join();
}

}  // namespace netgrip
