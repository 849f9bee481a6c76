#pragma once

#include <string>
#include <vector>

#include "spinprep/donor.hpp"

namespace spinprep {

struct ConstantRecord {
  std::string name;
  double value{};
  std::string unit;
  std::string source;
};

// Versioned table of named physical constants. The file format is plain
// text: a version line followed by whitespace-separated
// "name value unit source" rows; unit strings carry no spaces.
class ConstantsRegistry {
 public:
  // Phosphorus-31 donor preset: gyromagnetic ratios and hyperfine
  // coupling as plain 1/(T s) and 1/s numbers.
  static ConstantsRegistry p31();
  static ConstantsRegistry load(const std::string& path);
  void save(const std::string& path) const;

  const std::string& version() const { return version_; }
  void set_version(std::string v) { version_ = std::move(v); }
  bool has(const std::string& name) const;
  double value(const std::string& name) const;
  const std::string& unit(const std::string& name) const;
  const std::vector<ConstantRecord>& records() const { return records_; }
  void set(const std::string& name, double value, const std::string& unit,
           const std::string& source);

  // Builds DonorParams from gamma_e, gamma_n, hyperfine_A entries.
  DonorParams donor_params() const;

 private:
  const ConstantRecord* find(const std::string& name) const;
  std::string version_ = "unversioned";
  std::vector<ConstantRecord> records_;
};

}  // namespace spinprep
