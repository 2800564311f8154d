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

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netgrip
{

using Vec3 = Eigen::Vector3d;

inline constexpr int kClawCount = 8;
inline constexpr int kSensorCount = 4;

/// Base class for all library errors.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the operation's domain (slider travel, force, voltage).
class DomainError : public Error
{
public:
  using Error::Error;
};

/// Invalid construction parameters (mesh counts, shape dimensions, configs).
class ConstructionError : public Error
{
public:
  using Error::Error;
};

/// Caller broke a documented precondition (e.g. unconverged equilibrium).
class PreconditionError : public Error
{
public:
  using Error::Error;
};

/// Linkage fit could not reproduce the requested endpoints.
class FittingError : public Error
{
public:
  FittingError(const std::string& what, double residual)
    : Error(what + " (residual " + std::to_string(residual) + " mm)"),
      residual_(residual)
  {
  }
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// Zero-length edge or similar degenerate geometry.
class SingularConfiguration : public Error
{
public:
  using Error::Error;
};

/// Equilibrium solver hit its iteration cap.
class ConvergenceError : public Error
{
public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
    : Error(what), residuals_(std::move(residuals))
  {
  }
  /// Gradient infinity-norm after every iteration.
  const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
  std::vector<double> residuals_;
};

/// Malformed input file; carries a 1-based line number when known.
class FormatError : public Error
{
public:
  FormatError(const std::string& what, std::size_t line = 0)
    : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
  {
  }
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Scenario JSON failed validation; names the offending field.
class SchemaError : public Error
{
public:
  SchemaError(const std::string& field, const std::string& what)
    : Error(field + ": " + what), field_(field)
  {
  }
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Trace too short for the configured dwell.
class InsufficientData : public Error
{
public:
  using Error::Error;
};

}  // namespace netgrip
