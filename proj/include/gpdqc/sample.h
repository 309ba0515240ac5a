#ifndef GPDQC_SAMPLE_H_
#define GPDQC_SAMPLE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gpdqc {

// Excesses over a threshold together with the size of the sample they came
// from. When built from raw data, threshold = x_{n-k,n} and
// excesses[j-1] = x_{n-j+1,n} - threshold (largest first).
struct ExcessSample {
  double threshold = 0.0;
  std::vector<double> excesses;
  std::size_t n = 0;
  // Observation period in years; needed for rates (return levels, premiums).
  std::optional<double> years;
  // Number of zero excesses caused by ties at the threshold.
  std::size_t ties_at_threshold = 0;

  std::size_t k() const { return excesses.size(); }

  // Throws Error(kValidation) on k = 0, k > n, or a negative excess.
  void validate() const;

  // The k + 1 largest observations in ascending order: threshold, then
  // threshold + excess. Semiparametric estimators work on this view.
  std::vector<double> top_order_statistics() const;
};

// np/k, the fraction of the excess sample lying above the p-quantile. Values
// within two ulps of 1 are returned as exactly 1 so that p = k/n maps to the
// threshold itself.
double exceedance_ratio(std::size_t n, double p, std::size_t k);

// Threshold u = x_{n-k,n}; requires 1 <= k < n.
ExcessSample extract_excesses(std::span<const double> x, std::size_t k);

// All observations strictly above u; k is their count.
ExcessSample excesses_over_threshold(std::span<const double> x, double u);

}  // namespace gpdqc

#endif  // GPDQC_SAMPLE_H_
