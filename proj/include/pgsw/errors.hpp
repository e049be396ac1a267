#pragma once

#include <stdexcept>
#include <string>

namespace pgsw {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (non-finite coordinate, z <= 0, ...).
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// A cost guard (vertex count, traversal budget, iteration cap) was exceeded.
class GuardExceeded : public Error {
public:
  using Error::Error;
};

/// Operation requires a connected graph.
class Disconnected : public Error {
public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A structural or mathematical invariant failed; indicates a bug or a corrupt input.
class InvariantViolation : public Error {
public:
  using Error::Error;
};

}  // namespace pgsw
