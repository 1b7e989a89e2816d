// Copyright 2026 The Breathline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BREATHLINE_ERROR_H_
#define BREATHLINE_ERROR_H_

#include <stdexcept>
#include <string>

namespace breathline {

// Every failure raised by the library derives from Error so callers can
// catch one type. The subclasses mirror the failure classes of the CLI:
// ConfigError and UsageError map to exit code 2, everything else to 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file contents (bad header, truncated payload, bad CSV row).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed input in an encoding or version we do not handle.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Invalid or infeasible configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Invalid arguments to an operation (too short, empty, mismatched lengths).
class InputError : public Error {
 public:
  using Error::Error;
};

// Tensor shape mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Semantic validation failure (overlapping intervals and the like).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Metric undefined for the given input (e.g. one class only).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

// Model fitting cannot proceed (e.g. single-class training data).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace breathline

#endif  // BREATHLINE_ERROR_H_
