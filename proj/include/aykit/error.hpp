#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace aykit {

// Base of every error the library throws on bad input. The CLI maps all of
// these (except IoError) to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, std::optional<std::size_t> index = {})
      : Error(index ? what + " (index " + std::to_string(*index) + ")" : what), index_(index) {}
  std::optional<std::size_t> index() const { return index_; }

 private:
  std::optional<std::size_t> index_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

class NoSolutionError : public Error {
 public:
  using Error::Error;
};

// A path violates a pathwise constraint (drawdown) before its declared end.
class ConstraintError : public DomainError {
 public:
  ConstraintError(const std::string& what, std::size_t index) : DomainError(what, index) {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace aykit
