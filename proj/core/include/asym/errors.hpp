#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asym {

// Root of the library's exception hierarchy. Every failure surfaced by the
// core library derives from this so callers can catch at charge granularity.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

class ChartMismatch : public Error {
 public:
  using Error::Error;
};

// Evaluation outside the domain of a metric, expression or chart
// (log of a non-positive number, the excised region, r = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, std::size_t node)
      : Error(what), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

class FitError : public Error {
 public:
  using Error::Error;
};

// Syntax errors carry a 1-based byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error("offset " + std::to_string(offset) + ": " + message),
        message_(message),
        offset_(offset) {}
  const std::string& message() const { return message_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string message_;
  std::size_t offset_;
};

}  // namespace asym
