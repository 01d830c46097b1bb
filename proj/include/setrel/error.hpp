#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace setrel {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operator was applied to arguments of the wrong sort.
class SortError : public Error {
 public:
  SortError(std::string expected, std::string got, std::size_t position)
      : Error("sort mismatch at argument " + std::to_string(position) +
              ": expected " + expected + ", got " + got),
        expected_(std::move(expected)),
        got_(std::move(got)),
        position_(position) {}

  const std::string& expected() const { return expected_; }
  const std::string& got() const { return got_; }
  std::size_t position() const { return position_; }

 private:
  std::string expected_;
  std::string got_;
  std::size_t position_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in the concrete input; carries a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t col, const std::string& msg)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}

  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

class UndeclaredSymbol : public ParseError {
 public:
  UndeclaredSymbol(std::size_t line, std::size_t col, const std::string& name)
      : ParseError(line, col, "undeclared symbol " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// A sort error raised while building a term from source text.
class LocatedSortError : public SortError {
 public:
  LocatedSortError(const SortError& e, std::size_t line, std::size_t col)
      : SortError(e), line_(line), col_(col),
        what_(std::to_string(line) + ":" + std::to_string(col) + ": " + e.what()) {}

  const char* what() const noexcept override { return what_.c_str(); }
  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
  std::string what_;
};

/// A limit (steps, time, disjunct cap, enumeration budget) was exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Literal outside the language of the selected element oracle.
class UnsupportedLiteral : public Error {
 public:
  using Error::Error;
};

/// The element oracle could not produce an answer or an assignment.
class OracleIncomplete : public Error {
 public:
  using Error::Error;
};

class UnassignedVariable : public Error {
 public:
  using Error::Error;
};

}  // namespace setrel
