#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace l1pr {

/// Malformed edge-list or vector file. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyGraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Node id outside [0, n) or a seed that does not name a graph node.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Conductance requested for S = {} or S = V.
class InvalidCutError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense oracles refuse graphs above their node cap.
class OracleCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base for solver iteration-cap failures; subclasses carry the partial result.
class BudgetExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace l1pr
