#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tempovis {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical input outside an operation's domain (non-positive duration,
/// empty data, zero bandwidth, evaluation outside a spline's knot range...).
class domain_error : public error {
 public:
  using error::error;
};

/// Malformed or inconsistent input text. `row()` is the 1-based line number
/// in the source file, or 0 when the error is not tied to one line.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t row = 0)
      : error(row == 0 ? what : "row " + std::to_string(row) + ": " + what),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Filesystem failure: unreadable input, unwritable output.
class io_error : public error {
 public:
  using error::error;
};

}  // namespace tempovis
