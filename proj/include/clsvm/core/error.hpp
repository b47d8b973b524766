#pragma once

#include <stdexcept>
#include <string>

namespace clsvm {

/// Coarse failure classes. The CLI maps each one to its own exit code.
enum class ErrorCategory {
  io,          // unreadable or unwritable file
  usage,       // bad command line
  schema,      // structurally malformed input: wrong dimensions, missing fields
  validation,  // well-formed input that violates a value invariant
  numeric,     // a solver produced or received non-finite values
  config,      // invalid configuration or parameter
};

const char* category_name(ErrorCategory category) noexcept;
int exit_code(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message);
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorCategory::io, message) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message) : Error(ErrorCategory::schema, message) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCategory::validation, message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message) : Error(ErrorCategory::numeric, message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error(ErrorCategory::config, message) {}
};

/// Throws an error of the same concrete type as `category` carrying `message`.
[[noreturn]] void throw_error(ErrorCategory category, const std::string& message);

}  // namespace clsvm
