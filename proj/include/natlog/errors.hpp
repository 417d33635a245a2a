#pragma once

#include <stdexcept>
#include <string>

namespace natlog {

// Base class of every error raised by the library.
struct Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TypeError : public Error { using Error::Error; };
struct FormatError : public Error { using Error::Error; };
struct ValidationError : public Error { using Error::Error; };
struct CorrectionIncomplete : public Error { using Error::Error; };
struct ConfigError : public Error { using Error::Error; };
struct NoTreeRecorded : public Error { using Error::Error; };
struct EmptyInput : public Error { using Error::Error; };
struct CompileError : public Error { using Error::Error; };

// Syntax error with a position in the offending document.
struct ParseError : public Error {
  ParseError(const std::string& msg, std::size_t line = 0, std::size_t col = 0)
      : Error(line ? msg + " (line " + std::to_string(line) + ", col " + std::to_string(col) + ")" : msg),
        line(line),
        col(col) {}
  std::size_t line;
  std::size_t col;
};

}  // namespace natlog
