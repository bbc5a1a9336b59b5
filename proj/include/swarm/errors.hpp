#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swarm {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scene node was constructed with an invalid parameter (e.g. radius <= 0).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DegenerateGradient : public Error {
 public:
  DegenerateGradient() : Error("SDF gradient vanishes at query point") {}
};

class UnsupportedText : public Error {
 public:
  using Error::Error;
};

// Syntax error in scene source, positioned at the first offending byte.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::size_t line, std::size_t column,
             std::string expected, std::string found)
      : Error(format(line, column, expected, found)),
        offset_(offset),
        line_(line),
        column_(column),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  static std::string format(std::size_t line, std::size_t column,
                            const std::string& expected,
                            const std::string& found) {
    return std::to_string(line) + ":" + std::to_string(column) +
           ": expected " + expected + ", found " + found;
  }

  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
  std::string found_;
};

class NoCodeFound : public Error {
 public:
  NoCodeFound() : Error("no scene code found in response") {}
};

class SamplingFailed : public Error {
 public:
  using Error::Error;
};

class InvalidK : public Error {
 public:
  using Error::Error;
};

class InsufficientTargets : public Error {
 public:
  using Error::Error;
};

class CommandCountMismatch : public Error {
 public:
  using Error::Error;
};

class LlmUnavailable : public Error {
 public:
  using Error::Error;
};

class Busy : public Error {
 public:
  Busy() : Error("a generation is already in flight for this session") {}
};

// A client frame that is not valid JSON or does not match the protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace swarm
