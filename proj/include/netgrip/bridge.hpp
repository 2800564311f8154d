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

#include "netgrip/controller.hpp"

#include <functional>
#include <string>
#include <string_view>

namespace netgrip
{

// Wire protocol: one UTF-8 JSON object per line.
//   server -> client  {"type":"telemetry",...}  {"type":"phase",...}
//                     {"type":"notice",...}     {"type":"error",...}
//   client -> server  {"type":"jog","target_mm":x}  {"type":"stop"}
//                     {"type":"reopen"}             {"type":"set_threshold","volts":v}

std::string encode_event(const LiveEvent& event);
std::string encode_error(std::string_view message);

/// Throws FormatError on anything that is not a well-formed command.
Command decode_command(std::string_view line);

struct ServeOptions
{
  std::string host = "127.0.0.1";
  int port = 8765;  // 0 picks a free port
  /// Pace ticks at the scenario sample rate; otherwise run flat out.
  bool realtime = true;
  /// Called once listening, with the bound port.
  std::function<void(int)> on_listening;
};

/// Port already in use or otherwise unbindable.
class BindError : public Error
{
public:
  using Error::Error;
};

/// Accepts one client, streams events until it disconnects, then returns.
/// Throws BindError when the socket cannot be bound.
void serve(const Scenario& scenario, const ServeOptions& options);

}  // namespace netgrip
