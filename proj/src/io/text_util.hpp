#pragma once

// Internal text-format helpers shared by the file parsers/writers.

#include <cstdio>
#include <string>
#include <vector>

namespace dmet::textio {

// Strip a trailing '#' comment, then trim surrounding whitespace.
inline std::string strip_comment(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Split on commas and/or whitespace; no empty fields returned.
inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Strict double parse: the whole token must be consumed.
inline bool parse_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size();
}

// Shortest exact decimal form of a double (17 significant digits).
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace dmet::textio
