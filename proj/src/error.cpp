#include "polardyn/error.hpp"

namespace polardyn {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Usage: return "usage";
    case ErrorCategory::Config: return "config";
    case ErrorCategory::Parse: return "parse";
    case ErrorCategory::Input: return "input";
    case ErrorCategory::Singular: return "singular";
    case ErrorCategory::Separation: return "separation";
    case ErrorCategory::Convergence: return "convergence";
    case ErrorCategory::Io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Usage: return 2;
    case ErrorCategory::Config: return 3;
    case ErrorCategory::Parse: return 4;
    case ErrorCategory::Input: return 5;
    case ErrorCategory::Singular: return 6;
    case ErrorCategory::Separation: return 7;
    case ErrorCategory::Convergence: return 8;
    case ErrorCategory::Io: return 9;
  }
  return 1;
}

}  // namespace polardyn
