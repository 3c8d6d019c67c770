#pragma once

#include <stdexcept>
#include <string>

namespace sarcaug {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable/unwritable files.
struct IoError : Error {
  using Error::Error;
};

// Malformed input data; carries the 1-based line number when known.
struct ParseError : Error {
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_number(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_number(0) {}
  std::size_t line_number;
};

// Bad configuration values (plan files, CLI flags, policy fields).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace sarcaug
