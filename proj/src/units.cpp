#include "spinprep/units.hpp"

#include <cstdio>
#include <stdexcept>

namespace spinprep {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_number(const std::string& text) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (pos != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

namespace {

std::string trimmed(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

// Splits "<number><suffix>" with optional space before the suffix.
std::pair<double, std::string> split_quantity(const std::string& text) {
  const std::string t = trimmed(text);
  size_t pos = 0;
  double v;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a quantity: '" + text + "'");
  }
  return {v, trimmed(t.substr(pos))};
}

}  // namespace

double parse_time_seconds(const std::string& text) {
  auto [v, suffix] = split_quantity(text);
  if (suffix.empty() || suffix == "s") return v;
  if (suffix == "ns") return v * 1e-9;
  if (suffix == "us") return v * 1e-6;
  if (suffix == "ms") return v * 1e-3;
  throw std::invalid_argument("unknown time unit: '" + suffix + "'");
}

double parse_field_tesla(const std::string& text) {
  auto [v, suffix] = split_quantity(text);
  if (suffix.empty() || suffix == "T") return v;
  if (suffix == "mT") return v * 1e-3;
  if (suffix == "uT") return v * 1e-6;
  throw std::invalid_argument("unknown field unit: '" + suffix + "'");
}

}  // namespace spinprep
