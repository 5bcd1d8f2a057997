// Copyright 2026 The Persona Authors.
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

#ifndef PERSONA_ERROR_HPP_
#define PERSONA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace persona {

// Base class for every error raised by the library. `code()` is a stable
// machine-readable identifier used by the CLI and the HTTP service.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Malformed input: bad syntax, out-of-range values, broken invariants in
// user-supplied data.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Formula text that does not follow the grammar. `position` is the 0-based
// byte offset of the offending token.
class SyntaxError : public ValidationError {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : ValidationError("syntax_error", message + " at position " +
                                            std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// An update whose result carries no probability mass at all.
class DegenerateUpdate : public Error {
 public:
  explicit DegenerateUpdate(const std::string& message)
      : Error("degenerate_update", message) {}
};

// A statistic that is undefined for the given sample (zero variance).
class DegenerateStatistics : public Error {
 public:
  explicit DegenerateStatistics(const std::string& message)
      : Error("degenerate_statistics", message) {}
};

// A dialogue operation issued in the wrong session phase.
class PhaseError : public Error {
 public:
  explicit PhaseError(const std::string& message)
      : Error("wrong_phase", message) {}
};

class NotFound : public Error {
 public:
  NotFound(std::string code, const std::string& message)
      : Error(std::move(code), message) {}
};

}  // namespace persona

#endif  // PERSONA_ERROR_HPP_
