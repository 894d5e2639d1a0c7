#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfc {

/// Base class for every error raised by the library. `code()` is a stable,
/// machine-parsable identifier that the CLI forwards to standard error.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("DomainError", what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("InvalidArgument", what) {}
};

// Contradictory or degenerate constraint set: no nonsingular monomial
// support exists within the exponent budget.
class SingularConstraintSet : public Error {
 public:
  explicit SingularConstraintSet(const std::string& what) : Error("SingularConstraintSet", what) {}
};

class UnknownCase : public Error {
 public:
  explicit UnknownCase(const std::string& what) : Error("UnknownCase", what) {}
};

class NodeSingularity : public Error {
 public:
  NodeSingularity(std::size_t node, const std::string& what)
      : Error("NodeSingularity", what), node_(node) {}

  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

class DivisorZero : public Error {
 public:
  DivisorZero(std::string coefficient, const std::string& what)
      : Error("DivisorZero", what), coefficient_(std::move(coefficient)) {}

  const std::string& coefficient() const noexcept { return coefficient_; }

 private:
  std::string coefficient_;
};

class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& what) : Error("RankDeficient", what) {}
};

class NoSignChange : public Error {
 public:
  explicit NoSignChange(const std::string& what) : Error("NoSignChange", what) {}
};

class NonFiniteState : public Error {
 public:
  NonFiniteState(std::size_t step, const std::string& what)
      : Error("NonFiniteState", what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
      : Error("ParseError", what), offset_(offset), expected_(std::move(expected)) {}

  /// Byte offset into the source string where parsing failed.
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

}  // namespace tfc
