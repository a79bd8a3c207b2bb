#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emotk {

/// Error categories. Each maps onto a fixed CLI exit code.
enum class ErrorKind {
  kInvalidInput,     // malformed or inconsistent data
  kIo,               // file could not be opened / written
  kUndefinedMetric,  // metric undefined on the given input (e.g. no positives)
  kGenerator,        // external text generator / scorer failed after retries
  kBudgetUnreachable,
  kUsage,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace emotk
