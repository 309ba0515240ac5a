#ifndef GPDQC_ERRORS_H_
#define GPDQC_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace gpdqc {

// Coarse classification used by the CLI to report a machine-readable error
// category and pick an exit code.
enum class ErrorCategory {
  kDomain,       // argument outside the mathematical domain
  kBracket,      // root bracket without a sign change
  kConvergence,  // iterative method hit its iteration cap
  kCurvature,    // non-positive curvature in the normal approximation
  kDegenerate,   // data too degenerate for an estimator
  kInfeasible,   // expert opinion that admits no valid prior
  kValidation,   // invalid configuration or input
  kIo,
};

std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace gpdqc

#endif  // GPDQC_ERRORS_H_
