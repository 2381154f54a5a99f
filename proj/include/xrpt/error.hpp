#pragma once

#include <stdexcept>
#include <string>

namespace xrpt {

/// Base of every error raised by the library. Callers that only need to
/// report a failure can catch this; tests match on the concrete type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundVariableError : public Error {
 public:
  using Error::Error;
};

class NotInNnfError : public Error {
 public:
  explicit NotInNnfError(const std::string& where = "violations degree")
      : Error("formula contains a negation node (" + where + ")") {}
};

class NonlinearError : public Error {
 public:
  using Error::Error;
};

class ArithmeticOverflowError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class SolverBudgetError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class UnknownLocationError : public ModelError {
 public:
  using ModelError::ModelError;
};

class NotEnabledError : public Error {
 public:
  using Error::Error;
};

class DomainViolationError : public Error {
 public:
  using Error::Error;
};

class UnknownLabelError : public Error {
 public:
  using Error::Error;
};

class DeadEndError : public Error {
 public:
  using Error::Error;
};

class StepBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class SutIoError : public Error {
 public:
  using Error::Error;
};

}  // namespace xrpt
