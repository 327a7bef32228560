#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gobsec {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string rule;
  std::string message;
  std::size_t offset = 0;

  std::string to_line() const;
};

class GobsecError : public std::runtime_error {
 public:
  explicit GobsecError(Diagnostic d)
      : std::runtime_error(d.rule + ": " + d.message), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

class ParseError : public GobsecError {
 public:
  ParseError(std::string message, std::size_t offset, int line, int column)
      : GobsecError({Severity::Error, "Parse", std::move(message), offset}),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Ill-formed type or environment.
class WfError : public GobsecError {
 public:
  using GobsecError::GobsecError;
};

/// Security (or simple) typing failure.
class TypeError : public GobsecError {
 public:
  using GobsecError::GobsecError;
};

/// Upper-bound chase hit an unbound or cyclic variable.
class TypeAlgebraError : public GobsecError {
 public:
  using GobsecError::GobsecError;
};

}  // namespace gobsec
