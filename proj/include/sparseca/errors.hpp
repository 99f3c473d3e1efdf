#pragma once

#include <stdexcept>
#include <string>

namespace sparseca {

/// Invalid arguments or data that violate a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that is well-formed but numerically degenerate (all-zero vectors,
/// axes with no mass, ...).
class DegenerateInputError : public InputError {
 public:
  using InputError::InputError;
};

/// A row or column of a contingency table has zero total.
class SingularMarginError : public InputError {
 public:
  SingularMarginError(const std::string& axis, const std::string& label)
      : InputError("empty " + axis + " '" + label +
                   "': margins must be positive (use --drop-empty to remove it)"),
        axis_(axis),
        label_(label) {}

  const std::string& axis() const noexcept { return axis_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::string axis_;
  std::string label_;
};

/// Malformed text input. Line and column are 1-based; 0 means unknown.
class ParseError : public InputError {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& what)
      : InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                   ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// File system failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparseca
