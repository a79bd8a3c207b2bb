#include "emotk/error.hpp"

namespace emotk {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid_input";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kUndefinedMetric: return "undefined_metric";
    case ErrorKind::kGenerator: return "generator";
    case ErrorKind::kBudgetUnreachable: return "budget_unreachable";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

}  // namespace emotk
