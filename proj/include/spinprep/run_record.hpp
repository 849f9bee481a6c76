#pragma once

#include <string>
#include <vector>

namespace spinprep {

struct RecordField {
  std::string key;    // no whitespace
  std::string value;  // formatted number for numeric fields
  std::string unit;   // "s", "T", "rad", "dimensionless", ... ; empty for strings
  bool numeric{};
};

// Structured result of one subcommand run. Text form is line-delimited
// "section key: value [unit]"; numeric values print with 17 significant
// digits so text round-trips are lossless.
struct RunRecord {
  std::string command;
  std::string constants_version;
  std::vector<RecordField> inputs;
  std::vector<RecordField> outputs;
  std::vector<RecordField> residuals;

  void add_input(const std::string& key, double v, const std::string& unit);
  void add_input(const std::string& key, const std::string& v);
  void add_output(const std::string& key, double v, const std::string& unit);
  void add_output(const std::string& key, const std::string& v);
  void add_residual(const std::string& key, double v, const std::string& unit);

  std::string to_text() const;
  static RunRecord from_text(const std::string& text);
  std::string to_json() const;
};

}  // namespace spinprep
