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

#include <string>
#include <string_view>
#include <vector>

namespace netgrip::csv
{

/// Shortest decimal text that parses back to the same double.
std::string format(double value);

/// Whole-field parse; throws FormatError(line) on junk.
double parse(std::string_view field, std::size_t line);

std::vector<std::string_view> split(std::string_view row, char sep = ',');

std::string_view trim(std::string_view text);

}  // namespace netgrip::csv
