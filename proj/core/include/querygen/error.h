#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace querygen {

// Base of every error the library throws. `code()` is a stable
// machine-readable identifier used by the CLI's --json-errors output.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class DdlSyntaxError : public Error {
 public:
  DdlSyntaxError(std::size_t statement_index, std::size_t position,
                 const std::string& message)
      : Error("ddl_syntax",
              "DDL statement " + std::to_string(statement_index) +
                  " at offset " + std::to_string(position) + ": " + message),
        statement_index_(statement_index),
        position_(position) {}

  std::size_t statement_index() const noexcept { return statement_index_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t statement_index_;
  std::size_t position_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax",
              "offset " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

#define QUERYGEN_SIMPLE_ERROR(Name, code_string)                 \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& message)                    \
        : Error(code_string, message) {}                         \
  }

QUERYGEN_SIMPLE_ERROR(DuplicateObjectError, "duplicate_object");
QUERYGEN_SIMPLE_ERROR(UnknownObjectError, "unknown_object");
QUERYGEN_SIMPLE_ERROR(GraphTooLargeError, "graph_too_large");
QUERYGEN_SIMPLE_ERROR(NotConnectedError, "not_connected");
QUERYGEN_SIMPLE_ERROR(InsufficientPoolError, "insufficient_pool");
QUERYGEN_SIMPLE_ERROR(ArityError, "arity");
QUERYGEN_SIMPLE_ERROR(ConnectionError, "connection");
QUERYGEN_SIMPLE_ERROR(LoadError, "load");
QUERYGEN_SIMPLE_ERROR(DomainError, "domain");
QUERYGEN_SIMPLE_ERROR(EmptyInputError, "empty_input");
QUERYGEN_SIMPLE_ERROR(MismatchError, "mismatch");
QUERYGEN_SIMPLE_ERROR(ConfigError, "config");
QUERYGEN_SIMPLE_ERROR(FormatError, "format");

#undef QUERYGEN_SIMPLE_ERROR

// Raised by LLM backends. The pipeline decides whether to retry.
class BackendError : public Error {
 public:
  BackendError(const std::string& message, int status, bool retryable,
               int attempts = 1)
      : Error("backend", message),
        status_(status),
        retryable_(retryable),
        attempts_(attempts) {}

  int status() const noexcept { return status_; }
  bool retryable() const noexcept { return retryable_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int status_;
  bool retryable_;
  int attempts_;
};

}  // namespace querygen
