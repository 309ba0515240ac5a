#include "gpdqc/datasets.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gpdqc/errors.h"

namespace gpdqc {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size()) return std::nullopt;
  return value;
}

}  // namespace

Dataset builtin_dataset(std::string_view name) {
  if (name == "fire") {
    return {"fire",
            "Norwegian fire claims over 22.0 million NKr, 1983-1992",
            {42.719, 105.860, 29.172, 22.654, 61.992, 35.000, 26.891, 25.590, 24.130,
             23.208, 37.772, 34.126, 27.990, 53.472, 36.269, 31.088, 25.907},
            22.0,
            10.0};
  }
  std::string msg = "unknown dataset '" + std::string(name) + "' (built in: fire";
  msg += "; other data must be given with --input)";
  throw Error(ErrorCategory::kValidation, msg);
}

std::vector<std::string> builtin_dataset_names() { return {"fire"}; }

std::vector<double> read_values(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto sep = view.find_first_of(",;\t");
    const std::string_view field = sep == std::string_view::npos ? view : view.substr(0, sep);
    const std::optional<double> value = parse_number(field);
    if (!value) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      std::ostringstream os;
      os << "line " << line_no << ": '" << field << "' is not a number";
      throw Error(ErrorCategory::kValidation, os.str());
    }
    if (!std::isfinite(*value)) {
      std::ostringstream os;
      os << "line " << line_no << ": non-finite value";
      throw Error(ErrorCategory::kValidation, os.str());
    }
    seen_content = true;
    values.push_back(*value);
  }
  return values;
}

std::vector<double> load_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open '" + path + "'");
  try {
    return read_values(in);
  } catch (const Error& e) {
    throw Error(e.category(), path + ": " + e.what());
  }
}

}  // namespace gpdqc
