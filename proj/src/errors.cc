#include "gpdqc/errors.h"

namespace gpdqc {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kDomain: return "domain";
    case ErrorCategory::kBracket: return "bracket";
    case ErrorCategory::kConvergence: return "convergence";
    case ErrorCategory::kCurvature: return "curvature";
    case ErrorCategory::kDegenerate: return "degenerate";
    case ErrorCategory::kInfeasible: return "infeasible";
    case ErrorCategory::kValidation: return "validation";
    case ErrorCategory::kIo: return "io";
  }
  return "unknown";
}

}  // namespace gpdqc
