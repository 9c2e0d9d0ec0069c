// Copyright 2026 The roadeval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef ROADEVAL_ERRORS_HPP_
#define ROADEVAL_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roadeval {

/// Base class for every error thrown by the devkit.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A 3D point lies at or behind the camera plane (z <= epsilon).
class PointBehindCamera : public Error
{
public:
  using Error::Error;
};

/// At least one box corner fails the projection precondition.
class BoxBehindCamera : public Error
{
public:
  using Error::Error;
};

/// Input point set too small or rank-deficient for plane fitting.
class DegenerateInput : public Error
{
public:
  using Error::Error;
};

/// Detections and ground truth passed to a per-frame operation disagree on frame id.
class FrameMismatch : public Error
{
public:
  using Error::Error;
};

/// A frame required by evaluation has no ground plane.
class MissingPlane : public Error
{
public:
  using Error::Error;
};

/// A similarity metric was requested on an empty true-positive set.
class EmptyTruePositives : public Error
{
public:
  using Error::Error;
};

/// A configuration value violates its documented range or structure.
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// A required section ("P2", "g", ...) is absent from a calibration file.
class MissingSection : public Error
{
public:
  explicit MissingSection(const std::string & section)
  : Error("missing section \"" + section + "\""), section_(section) {}

  const std::string & section() const noexcept {return section_;}

private:
  std::string section_;
};

/// Malformed text input. Carries a 1-based line and column for diagnostics.
class ParseError : public Error
{
public:
  ParseError(std::size_t line, std::size_t column, const std::string & reason)
  : Error("parse error at line " + std::to_string(line) + ", column " +
      std::to_string(column) + ": " + reason),
    line_(line), column_(column), reason_(reason) {}

  std::size_t line() const noexcept {return line_;}
  std::size_t column() const noexcept {return column_;}
  const std::string & reason() const noexcept {return reason_;}

private:
  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

}  // namespace roadeval

#endif  // ROADEVAL_ERRORS_HPP_
