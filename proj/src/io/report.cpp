#include "dmet/io/report.hpp"

#include <fstream>
#include <sstream>

#include "dmet/errors.hpp"

namespace dmet {

std::string tool_name() { return "delta-metrology"; }

std::string tool_version() { return "1.0.0"; }

OrderedJson measured_json(const Measured& m) {
  OrderedJson j;
  j["value"] = m.value;
  j["error"] = m.error;
  return j;
}

Measured measured_from_json(const OrderedJson& j) {
  if (!j.is_object() || !j.contains("value") || !j.contains("error"))
    throw ParseError("expected {value, error} object, got " + j.dump());
  return {j.at("value").get<double>(), j.at("error").get<double>()};
}

std::string render_json(const OrderedJson& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
  if (!out.good()) throw ConfigError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace dmet
