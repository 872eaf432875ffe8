#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gwlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (edge lists, clustering files, CSV, JSON ledgers).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}

  /// 1-based line (or row) number, 0 when not applicable.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A precondition on arguments was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The host graph cannot carry a watermark with the requested parameters.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Dataset download or verification failed.
class DatasetError : public Error {
 public:
  using Error::Error;
};

}  // namespace gwlab
