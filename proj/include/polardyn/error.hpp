#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polardyn {

// Error categories double as the CLI's machine-readable failure classes.
enum class ErrorCategory {
  Usage,       // unknown subcommand, bad flags
  Config,      // invalid or unknown configuration keys/values
  Parse,       // malformed input file
  Input,       // well-formed input violating a model invariant
  Singular,    // rank-deficient design matrix
  Separation,  // (quasi-)complete separation in the logistic fit
  Convergence, // solver did not converge
  Io,          // file system failures
};

std::string_view to_string(ErrorCategory category);

// Process exit status used by the CLI for each category (0 is success).
int exit_code(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace polardyn
