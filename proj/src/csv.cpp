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

#include "netgrip/csv.hpp"

#include "netgrip/common.hpp"

#include <charconv>
#include <cmath>

namespace netgrip::csv
{

std::string format(double value)
{
  if (value == 0.0)
    value = 0.0;  // drop the sign of negative zero
  char buffer[32];
  const auto r = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, r.ptr);
}

double parse(std::string_view field, std::size_t line)
{
  field = trim(field);
  double value = 0.0;
  const auto r = std::from_chars(field.data(), field.data() + field.size(), value);
  if (r.ec != std::errc() || r.ptr != field.data() + field.size() || field.empty())
    throw FormatError("not a number: '" + std::string(field) + "'", line);
  if (!std::isfinite(value))
    throw FormatError("non-finite value", line);
  return value;
}

std::vector<std::string_view> split(std::string_view row, char sep)
{
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true)
  {
    const std::size_t pos = row.find(sep, start);
    if (pos == std::string_view::npos)
    {
      fields.push_back(row.substr(start));
      break;
    }
    fields.push_back(row.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::string_view trim(std::string_view text)
{
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

}  // namespace netgrip::csv
