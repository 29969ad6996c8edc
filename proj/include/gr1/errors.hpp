#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gr1 {

/// Malformed specification text. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// The explicit-state encoding would need more variables than allowed.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed specification that the game construction cannot handle.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A counterstrategy was requested for a realizable specification.
class RealizableSpec : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gr1
