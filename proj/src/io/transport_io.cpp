#include "dmet/io/transport_io.hpp"

#include <cmath>
#include <sstream>

#include "dmet/errors.hpp"
#include "dmet/io/report.hpp"
#include "text_util.hpp"

namespace dmet {

using textio::fmt;

namespace {

Orientation parse_orientation(const std::string& v, const std::string& where) {
  if (v == "perpendicular") return Orientation::perpendicular;
  if (v == "parallel") return Orientation::parallel;
  if (v == "tilt") return Orientation::tilt;
  throw ParseError(where + ": unknown orientation '" + v + "'");
}

TraceQuantity parse_quantity(const std::string& v, const std::string& where) {
  if (v == "delta_sigma") return TraceQuantity::delta_sigma;
  if (v == "r_xy") return TraceQuantity::r_xy;
  throw ParseError(where + ": unknown quantity '" + v + "'");
}

const char* orientation_tag(Orientation o) {
  switch (o) {
    case Orientation::perpendicular: return "perpendicular";
    case Orientation::parallel: return "parallel";
    default: return "tilt";
  }
}

double parse_num(const std::string& v, const std::string& where) {
  double out;
  if (!textio::parse_double(v, out) || !std::isfinite(out))
    throw ParseError(where + ": expected a number, got '" + v + "'");
  return out;
}

}  // namespace

MagnetoTrace parse_transport_text(const std::string& text, const std::string& origin) {
  MagnetoTrace trace;
  bool have_orientation = false, sweep_angle = false;
  bool have_angle = false, have_field = false;
  double fixed_angle = 0.0, fixed_field = 0.0;
  std::vector<double> col1, value, error;
  bool data_started = false;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = textio::strip_comment(line);
    if (body.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);

    if (body.find('=') != std::string::npos) {
      if (data_started) throw ParseError(where + ": header line after data rows");
      for (const auto& token : textio::split_fields(body)) {
        auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == token.size())
          throw ParseError(where + ": malformed header token '" + token + "'");
        std::string key = token.substr(0, eq), val = token.substr(eq + 1);
        if (key == "orientation") {
          trace.orientation = parse_orientation(val, where);
          have_orientation = true;
        } else if (key == "quantity") {
          trace.quantity = parse_quantity(val, where);
        } else if (key == "temperature_K") {
          trace.temperature_K = parse_num(val, where);
        } else if (key == "angle") {
          fixed_angle = parse_num(val, where);
          have_angle = true;
        } else if (key == "sweep") {
          if (val != "angle")
            throw ParseError(where + ": only sweep=angle is supported, got '" + val + "'");
          sweep_angle = true;
        } else if (key == "B_T") {
          fixed_field = parse_num(val, where);
          have_field = true;
        } else {
          throw ParseError(where + ": unknown header key '" + key + "'");
        }
      }
      continue;
    }

    auto fields = textio::split_fields(body);
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError(where + ": expected 2 or 3 columns, got " +
                       std::to_string(fields.size()));
    col1.push_back(parse_num(fields[0], where));
    value.push_back(parse_num(fields[1], where));
    if (fields.size() == 3) {
      double err = parse_num(fields[2], where);
      if (err <= 0) throw ParseError(where + ": error column must be positive");
      if (error.size() != col1.size() - 1)
        throw ParseError(where + ": error column must be present on every row or none");
      error.push_back(err);
    } else if (!error.empty()) {
      throw ParseError(where + ": error column must be present on every row or none");
    }
    data_started = true;
  }

  if (!have_orientation) throw ParseError(origin + ": missing orientation header");
  if (col1.size() < 5)
    throw InsufficientDataError(origin + ": " + std::to_string(col1.size()) +
                                " data rows; at least 5 are required");

  if (trace.orientation == Orientation::tilt) {
    if (sweep_angle) {
      if (!have_field)
        throw ParseError(origin + ": sweep=angle needs the fixed field B_T=<v>");
      trace.angle_deg = col1;
      trace.field_T.assign(col1.size(), fixed_field);
    } else if (have_angle) {
      trace.field_T = col1;
      trace.angle_deg.assign(col1.size(), fixed_angle);
    } else {
      throw ParseError(origin + ": tilt trace needs angle=<deg> or sweep=angle B_T=<v>");
    }
  } else {
    if (sweep_angle || have_angle || have_field)
      throw ParseError(origin + ": angle/sweep/B_T headers apply to tilt traces only");
    trace.field_T = col1;
  }
  trace.value = std::move(value);
  trace.error = std::move(error);
  trace.validate();
  return trace;
}

MagnetoTrace parse_transport_file(const std::string& path) {
  return parse_transport_text(read_text_file(path), path);
}

std::string transport_to_text(const MagnetoTrace& trace,
                              const std::vector<std::string>& comments) {
  trace.validate();
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";

  std::string header = std::string("orientation=") + orientation_tag(trace.orientation) +
                       " quantity=" +
                       (trace.quantity == TraceQuantity::delta_sigma ? "delta_sigma" : "r_xy") +
                       " temperature_K=" + fmt(trace.temperature_K);

  bool angle_sweep = false;
  if (trace.orientation == Orientation::tilt) {
    for (double a : trace.angle_deg) angle_sweep = angle_sweep || a != trace.angle_deg[0];
    if (angle_sweep) {
      for (double b : trace.field_T)
        if (b != trace.field_T[0])
          throw ConfigError(
              "transport writer: an angle sweep must be at one field magnitude");
      header += " sweep=angle B_T=" + fmt(trace.field_T[0]);
    } else {
      header += " angle=" + fmt(trace.angle_deg[0]);
    }
  }
  out += header + "\n";
  out += angle_sweep ? "# angle_deg,value,error\n" : "# B_T,value,error\n";

  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += fmt(angle_sweep ? trace.angle_deg[i] : trace.field_T[i]) + "," +
           fmt(trace.value[i]);
    if (!trace.error.empty()) out += "," + fmt(trace.error[i]);
    out += "\n";
  }
  return out;
}

void write_transport_file(const std::string& path, const MagnetoTrace& trace,
                          const std::vector<std::string>& comments) {
  write_text_file(path, transport_to_text(trace, comments));
}

}  // namespace dmet
