//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_ERROR_H_
#define HOCD_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hocd {

class DimensionError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class InfeasiblePointError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ParseError: public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) { }

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class DisconnectedGraphError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DegeneratePlaneError: public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Raised when an approximate trial point violates the model decrease or
// first-order subproblem conditions.
class SubproblemError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hocd

#endif  // HOCD_ERROR_H_
