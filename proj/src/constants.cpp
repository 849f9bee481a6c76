#include "spinprep/constants.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spinprep/units.hpp"

namespace spinprep {

ConstantsRegistry ConstantsRegistry::p31() {
  ConstantsRegistry r;
  r.version_ = "p31.v1";
  r.set("gamma_e", 2.797e10, "1/(T*s)", "31P");
  r.set("gamma_n", 1.723e7, "1/(T*s)", "31P");
  r.set("hyperfine_A", 1.1753e8, "1/s", "31P");
  return r;
}

const ConstantRecord* ConstantsRegistry::find(const std::string& name) const {
  for (const auto& rec : records_)
    if (rec.name == name) return &rec;
  return nullptr;
}

bool ConstantsRegistry::has(const std::string& name) const { return find(name) != nullptr; }

double ConstantsRegistry::value(const std::string& name) const {
  const ConstantRecord* rec = find(name);
  if (!rec) throw std::out_of_range("constants registry: no entry '" + name + "'");
  return rec->value;
}

const std::string& ConstantsRegistry::unit(const std::string& name) const {
  const ConstantRecord* rec = find(name);
  if (!rec) throw std::out_of_range("constants registry: no entry '" + name + "'");
  return rec->unit;
}

void ConstantsRegistry::set(const std::string& name, double value, const std::string& unit,
                            const std::string& source) {
  for (auto& rec : records_) {
    if (rec.name == name) {
      rec.value = value;
      rec.unit = unit;
      rec.source = source;
      return;
    }
  }
  records_.push_back({name, value, unit, source});
}

DonorParams ConstantsRegistry::donor_params() const {
  return {value("gamma_e"), value("gamma_n"), value("hyperfine_A")};
}

void ConstantsRegistry::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("constants registry: cannot write '" + path + "'");
  out << "# constants registry\n";
  out << "version " << version_ << "\n";
  for (const auto& rec : records_)
    out << rec.name << " " << format_number(rec.value) << " " << rec.unit << " " << rec.source
        << "\n";
  if (!out.good()) throw std::runtime_error("constants registry: write failed for '" + path + "'");
}

ConstantsRegistry ConstantsRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("constants registry: cannot read '" + path + "'");
  ConstantsRegistry r;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string first;
    ss >> first;
    if (first == "version") {
      ss >> r.version_;
      continue;
    }
    std::string value_text, unit, source;
    if (!(ss >> value_text >> unit >> source))
      throw std::runtime_error("constants registry: malformed line " + std::to_string(lineno) +
                               " in '" + path + "'");
    r.set(first, parse_number(value_text), unit, source);
  }
  return r;
}

}  // namespace spinprep
