#ifndef GPDQC_DATASETS_H_
#define GPDQC_DATASETS_H_

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gpdqc {

struct Dataset {
  std::string name;
  std::string description;
  std::vector<double> values;
  // Set when the values are already the exceedances of a fixed threshold.
  std::optional<double> threshold;
  std::optional<double> years;
};

// "fire": Norwegian fire claims above 22.0 million NKr, 1983-1992 (17
// values, T = 10 years). Throws Error(kValidation) for any other name.
Dataset builtin_dataset(std::string_view name);
std::vector<std::string> builtin_dataset_names();

// One number per line. A first line that does not parse as a number is a
// header and is skipped; blank lines are ignored. Only the first
// comma/semicolon/tab separated field of each line is read.
std::vector<double> read_values(std::istream& in);
// Throws Error(kIo) when the file cannot be opened.
std::vector<double> load_values(const std::string& path);

}  // namespace gpdqc

#endif  // GPDQC_DATASETS_H_
