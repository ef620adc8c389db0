// Copyright 2026 The critzone Authors
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

#ifndef CRITZONE__ERROR_HPP_
#define CRITZONE__ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace critzone
{

enum class ErrorCategory {
  domain,           // argument outside the operation's domain (v_x <= 0, t < 0, ...)
  scenario,         // scenario invariant violated
  unsupported,      // operation not defined for the requested model kind
  parse,            // malformed scenario text or CLI argument
  non_convergence,  // root finder hit max_iter
  singularity,      // zero derivative at a root-finder iterate
  io,
};

constexpr std::string_view to_string(ErrorCategory category)
{
  switch (category) {
    case ErrorCategory::domain:
      return "domain";
    case ErrorCategory::scenario:
      return "scenario";
    case ErrorCategory::unsupported:
      return "unsupported";
    case ErrorCategory::parse:
      return "parse";
    case ErrorCategory::non_convergence:
      return "non_convergence";
    case ErrorCategory::singularity:
      return "singularity";
    case ErrorCategory::io:
      return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error
{
public:
  Error(ErrorCategory category, const std::string & what)
  : std::runtime_error(what), category_(category)
  {
  }

  ErrorCategory category() const noexcept { return category_; }

private:
  ErrorCategory category_;
};

class DomainError : public Error
{
public:
  explicit DomainError(const std::string & what) : Error(ErrorCategory::domain, what) {}
};

class ScenarioError : public Error
{
public:
  explicit ScenarioError(const std::string & what) : Error(ErrorCategory::scenario, what) {}
};

class UnsupportedError : public Error
{
public:
  explicit UnsupportedError(const std::string & what) : Error(ErrorCategory::unsupported, what)
  {
  }
};

class ParseError : public Error
{
public:
  /// line <= 0 when the text did not come from a file (e.g. a CLI flag).
  ParseError(int line, const std::string & what)
  : Error(ErrorCategory::parse, line > 0 ? "line " + std::to_string(line) + ": " + what : what),
    line_(line)
  {
  }

  int line() const noexcept { return line_; }

private:
  int line_;
};

class IoError : public Error
{
public:
  explicit IoError(const std::string & what) : Error(ErrorCategory::io, what) {}
};

/// Root finder gave up; carries the last iterate so callers can inspect it.
class NonConvergenceError : public Error
{
public:
  NonConvergenceError(double last_iterate, int iterations, const std::string & what)
  : Error(ErrorCategory::non_convergence, what), last_iterate_(last_iterate),
    iterations_(iterations)
  {
  }

  double last_iterate() const noexcept { return last_iterate_; }
  int iterations() const noexcept { return iterations_; }

private:
  double last_iterate_;
  int iterations_;
};

class SingularityError : public Error
{
public:
  SingularityError(double iterate, const std::string & what)
  : Error(ErrorCategory::singularity, what), iterate_(iterate)
  {
  }

  double iterate() const noexcept { return iterate_; }

private:
  double iterate_;
};

}  // namespace critzone

#endif  // CRITZONE__ERROR_HPP_
