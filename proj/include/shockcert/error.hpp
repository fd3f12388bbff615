#pragma once

#include <stdexcept>
#include <string>

namespace shockcert {

// Base of every exception thrown by the toolkit. category() is the stable,
// machine-parsable tag the CLI prints on stderr.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error("ParseError", format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error("ValidationError", what) {}
};

class NonTermination : public Error {
 public:
  explicit NonTermination(const std::string& what) : Error("NonTermination", what) {}
};

class UnsupportedOperator : public Error {
 public:
  explicit UnsupportedOperator(const std::string& what) : Error("UnsupportedOperator", what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error("DimensionError", what) {}
};

class NonFiniteState : public Error {
 public:
  NonFiniteState(const std::string& what, long step)
      : Error("NonFiniteState", what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace shockcert
