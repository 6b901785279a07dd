#pragma once

#include <stdexcept>
#include <string>

namespace fdaa {

// Base of every error raised by the library. Callers that only need a
// message catch this; the subclasses exist for routing (exit codes, HTTP
// status) rather than for carrying extra state.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FmlError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InferenceError : public Error {
 public:
  using Error::Error;
};

class SgfError : public Error {
 public:
  using Error::Error;
};

class EngineError : public Error {
 public:
  enum class Kind { connect, timeout, rejected, malformed, transport };

  EngineError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class AssessmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace fdaa
