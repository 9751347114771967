#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weyl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation failure: unbound variable, or a domain error at a given node.
class EvalError : public Error {
 public:
  EvalError(const std::string& what, std::string node)
      : Error(what + " in '" + node + "'"), node_(std::move(node)) {}

  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

/// A physical precondition was violated (q = 0, sin(theta0) = 0, step <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Scenario file could not be read or validated.
class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& what, std::string key = {}, std::size_t line = 0)
      : Error(what), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

}  // namespace weyl
