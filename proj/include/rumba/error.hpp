#pragma once

#include <stdexcept>
#include <string>

namespace rumba {

// Failure categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
  Input = 2,     // malformed or infeasible input, validation failures
  Limit = 3,     // resource or enumeration limits exceeded
  Overflow = 4,  // 64-bit integer overflow in exact arithmetic
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

class LimitError : public Error {
 public:
  explicit LimitError(const std::string& what) : Error(ErrorKind::Limit, what) {}
};

class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what)
      : Error(ErrorKind::Overflow, what) {}
};

}  // namespace rumba
