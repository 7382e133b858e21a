#pragma once

#include <string>

#include <json.hpp>

#include "dmet/measured.hpp"

namespace dmet {

// Reports are JSON documents with insertion-ordered keys, so a given run
// serializes identically every time.
using OrderedJson = nlohmann::ordered_json;

std::string tool_name();     // "delta-metrology"
std::string tool_version();

// {"value": v, "error": e}
OrderedJson measured_json(const Measured& m);
Measured measured_from_json(const OrderedJson& j);

// 2-space indented serialization with a trailing newline.
std::string render_json(const OrderedJson& doc);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);  // ParseError if unreadable

}  // namespace dmet
