#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace equibench {

enum class ErrorKind {
  parse,       // malformed input file or payload
  conflict,    // duplicate key or id
  not_found,   // unknown language, task, dataset
  domain,      // argument outside a function's domain
  degenerate,  // formula undefined for this input (e.g. all-zero Gini)
  validation,  // payload rejected by event validation
  checksum,    // corrupt snapshot
  io,          // storage failure
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the engine.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Not-found error that remembers the key which failed to resolve.
class NotFoundError : public Error {
 public:
  NotFoundError(std::string what_kind, std::string key)
      : Error(ErrorKind::not_found, "unknown " + what_kind + " '" + key + "'"),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Parse error tied to a line of an input file (1-based; 0 when not
/// line-oriented).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string message)
      : Error(ErrorKind::parse,
              line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace equibench
