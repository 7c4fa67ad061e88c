#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dam {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownNominal : public Error {
 public:
  explicit UnknownNominal(const std::string& name)
      : Error("unknown nominal '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class NotASeller : public Error {
 public:
  using Error::Error;
};

// A diffusion binding or coalition names something that is not a seller,
// or names the same seller twice.
class ArityError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class InvalidMechanism : public Error {
 public:
  using Error::Error;
};

// check() was handed a formula containing a coalition modality.
class CoalitionOperatorPresent : public Error {
 public:
  CoalitionOperatorPresent()
      : Error("formula contains a coalition modality; use check_strategic") {}
};

class MalformedInstance : public Error {
 public:
  using Error::Error;
};

class SizeLimitExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace dam
