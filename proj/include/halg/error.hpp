#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace halg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries a 1-based line/column.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column),
        message_(what) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// A ParseError located in a named input (file:line:column: message).
class LoadError : public ParseError {
 public:
  LoadError(const std::string& origin, const ParseError& e)
      : ParseError(e), where_(origin + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.message()),
        origin_(origin) {}

  const char* what() const noexcept override { return where_.c_str(); }
  const std::string& origin() const { return origin_; }

 private:
  std::string where_;
  std::string origin_;
};

/// An enumeration or closure bound was hit before the computation finished.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t reached)
      : Error(what + " (reached " + std::to_string(reached) + ")"), reached_(reached) {}

  std::size_t reached() const { return reached_; }

 private:
  std::size_t reached_;
};

}  // namespace halg
