//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>

namespace rlqn {

class DimensionMismatch: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class EmptyMemory: public std::logic_error {
public:
  EmptyMemory(): std::logic_error("limited memory store holds no pairs") { }
};

// Objective or gradient evaluated to NaN/Inf.
class NonFiniteValue: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotDescent: public std::invalid_argument {
public:
  NotDescent(): std::invalid_argument("search direction is not a descent direction") { }
};

class LineSearchFailed: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class BreakdownDenominator: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class UnknownProblem: public ConfigError {
public:
  explicit UnknownProblem(const std::string &name)
      : ConfigError("unknown problem: " + name) { }
};

class UnknownAlgo: public ConfigError {
public:
  explicit UnknownAlgo(const std::string &name)
      : ConfigError("unknown algorithm: " + name) { }
};

class DuplicateRow: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rlqn
