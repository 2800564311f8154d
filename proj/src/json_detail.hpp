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

#include "json.hpp"

#include <string>

namespace netgrip::detail
{

nlohmann::json shape_to_json(const Shape& shape);

/// Throws SchemaError naming `path` on a bad shape record.
Shape shape_from_json(const nlohmann::json& value, const std::string& path);

}  // namespace netgrip::detail
