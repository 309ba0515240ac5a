#include "gpdqc/sample.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "gpdqc/errors.h"

namespace gpdqc {

void ExcessSample::validate() const {
  if (excesses.empty()) {
    throw Error(ErrorCategory::kValidation, "excess sample is empty (k = 0)");
  }
  if (k() > n) {
    std::ostringstream os;
    os << "excess sample has k = " << k() << " > n = " << n;
    throw Error(ErrorCategory::kValidation, os.str());
  }
  for (double y : excesses) {
    if (!(y >= 0.0) || !std::isfinite(y)) {
      std::ostringstream os;
      os << "excesses must be finite and non-negative, got " << y;
      throw Error(ErrorCategory::kValidation, os.str());
    }
  }
  if (years && !(*years > 0.0)) {
    throw Error(ErrorCategory::kValidation, "observation period must be positive");
  }
}

std::vector<double> ExcessSample::top_order_statistics() const {
  std::vector<double> x;
  x.reserve(k() + 1);
  x.push_back(threshold);
  for (double y : excesses) x.push_back(threshold + y);
  std::sort(x.begin() + 1, x.end());
  return x;
}

double exceedance_ratio(std::size_t n, double p, std::size_t k) {
  const double ratio = static_cast<double>(n) * p / static_cast<double>(k);
  if (std::abs(ratio - 1.0) <= 2.0 * std::numeric_limits<double>::epsilon()) return 1.0;
  return ratio;
}

ExcessSample extract_excesses(std::span<const double> x, std::size_t k) {
  const std::size_t n = x.size();
  if (k < 1 || k >= n) {
    std::ostringstream os;
    os << "extract_excesses: need 1 <= k < n, got k = " << k << ", n = " << n;
    throw Error(ErrorCategory::kValidation, os.str());
  }
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  ExcessSample sample;
  sample.n = n;
  sample.threshold = sorted[n - k - 1];
  sample.excesses.reserve(k);
  for (std::size_t j = 1; j <= k; ++j) {
    const double y = sorted[n - j] - sample.threshold;
    if (y == 0.0) ++sample.ties_at_threshold;
    sample.excesses.push_back(y);
  }
  return sample;
}

ExcessSample excesses_over_threshold(std::span<const double> x, double u) {
  ExcessSample sample;
  sample.n = x.size();
  sample.threshold = u;
  for (double v : x) {
    if (v > u) sample.excesses.push_back(v - u);
  }
  std::sort(sample.excesses.begin(), sample.excesses.end(), std::greater<>());
  if (sample.excesses.empty()) {
    std::ostringstream os;
    os << "no observation exceeds the threshold " << u;
    throw Error(ErrorCategory::kValidation, os.str());
  }
  return sample;
}

}  // namespace gpdqc
