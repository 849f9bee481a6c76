#include "spinprep/run_record.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "spinprep/units.hpp"

namespace spinprep {

namespace {

void add_field(std::vector<RecordField>& fields, const std::string& key, double v,
               const std::string& unit) {
  if (key.find_first_of(" \t:") != std::string::npos)
    throw std::invalid_argument("record key must not contain whitespace or ':'");
  fields.push_back({key, format_number(v), unit, true});
}

void add_field(std::vector<RecordField>& fields, const std::string& key, const std::string& v) {
  if (key.find_first_of(" \t:") != std::string::npos)
    throw std::invalid_argument("record key must not contain whitespace or ':'");
  fields.push_back({key, v, "", false});
}

void write_section(std::ostringstream& out, const char* section,
                   const std::vector<RecordField>& fields) {
  for (const auto& f : fields) {
    out << section << " " << f.key << ": " << f.value;
    if (f.numeric) out << " " << f.unit;
    out << "\n";
  }
}

}  // namespace

void RunRecord::add_input(const std::string& key, double v, const std::string& unit) {
  add_field(inputs, key, v, unit);
}
void RunRecord::add_input(const std::string& key, const std::string& v) {
  add_field(inputs, key, v);
}
void RunRecord::add_output(const std::string& key, double v, const std::string& unit) {
  add_field(outputs, key, v, unit);
}
void RunRecord::add_output(const std::string& key, const std::string& v) {
  add_field(outputs, key, v);
}
void RunRecord::add_residual(const std::string& key, double v, const std::string& unit) {
  add_field(residuals, key, v, unit);
}

std::string RunRecord::to_text() const {
  std::ostringstream out;
  out << "command: " << command << "\n";
  out << "constants_version: " << constants_version << "\n";
  write_section(out, "input", inputs);
  write_section(out, "output", outputs);
  write_section(out, "residual", residuals);
  return out.str();
}

RunRecord RunRecord::from_text(const std::string& text) {
  RunRecord rec;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto fail = [&](const char* why) {
      throw std::runtime_error("record parse: " + std::string(why) + " at line " +
                               std::to_string(lineno));
    };
    const size_t colon = line.find(": ");
    if (colon == std::string::npos) fail("missing ': '");
    const std::string head = line.substr(0, colon);
    const std::string rest = line.substr(colon + 2);
    if (head == "command") {
      rec.command = rest;
      continue;
    }
    if (head == "constants_version") {
      rec.constants_version = rest;
      continue;
    }
    const size_t space = head.find(' ');
    if (space == std::string::npos) fail("unknown section");
    const std::string section = head.substr(0, space);
    const std::string key = head.substr(space + 1);
    std::vector<RecordField>* fields = nullptr;
    if (section == "input")
      fields = &rec.inputs;
    else if (section == "output")
      fields = &rec.outputs;
    else if (section == "residual")
      fields = &rec.residuals;
    else
      fail("unknown section");

    // Numeric fields are exactly "VALUE UNIT"; anything else is a string.
    const size_t vsep = rest.find(' ');
    bool numeric = false;
    if (vsep != std::string::npos && rest.find(' ', vsep + 1) == std::string::npos) {
      try {
        parse_number(rest.substr(0, vsep));
        numeric = true;
      } catch (const std::invalid_argument&) {
        numeric = false;
      }
    }
    if (numeric)
      fields->push_back({key, rest.substr(0, vsep), rest.substr(vsep + 1), true});
    else
      fields->push_back({key, rest, "", false});
  }
  return rec;
}

std::string RunRecord::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["constants_version"] = constants_version;
  const auto dump_fields = [](const std::vector<RecordField>& fields) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& f : fields) {
      nlohmann::json item;
      if (f.numeric) {
        item["value"] = parse_number(f.value);
        item["unit"] = f.unit;
      } else {
        item["value"] = f.value;
      }
      obj[f.key] = item;
    }
    return obj;
  };
  j["inputs"] = dump_fields(inputs);
  j["outputs"] = dump_fields(outputs);
  j["residuals"] = dump_fields(residuals);
  return j.dump(2);
}

}  // namespace spinprep
