#include "clsvm/core/error.hpp"

namespace clsvm {

const char* category_name(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::io: return "io";
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::schema: return "schema";
    case ErrorCategory::validation: return "validation";
    case ErrorCategory::numeric: return "numeric";
    case ErrorCategory::config: return "config";
  }
  return "unknown";
}

int exit_code(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::usage: return 2;
    case ErrorCategory::io: return 3;
    case ErrorCategory::schema: return 4;
    case ErrorCategory::validation: return 5;
    case ErrorCategory::numeric: return 6;
    case ErrorCategory::config: return 7;
  }
  return 1;
}

Error::Error(ErrorCategory category, const std::string& message)
    : std::runtime_error(message), category_(category) {}

}  // namespace clsvm

namespace clsvm {

void throw_error(ErrorCategory category, const std::string& message) {
  switch (category) {
    case ErrorCategory::io: throw IoError(message);
    case ErrorCategory::schema: throw SchemaError(message);
    case ErrorCategory::validation: throw ValidationError(message);
    case ErrorCategory::numeric: throw NumericError(message);
    case ErrorCategory::config: throw ConfigError(message);
    case ErrorCategory::usage: break;
  }
  throw Error(category, message);
}

}  // namespace clsvm
