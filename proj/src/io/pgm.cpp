#include "dmet/io/pgm.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "dmet/errors.hpp"
#include "text_util.hpp"

namespace dmet {

void write_pgm16(const std::string& path, int nx, int ny,
                 const std::vector<double>& values, double vmin, double vmax,
                 const std::vector<std::string>& comments) {
  if (nx <= 0 || ny <= 0) throw ConfigError("pgm: image dimensions must be positive");
  if (values.size() != static_cast<std::size_t>(nx) * ny)
    throw ConfigError("pgm: value count does not match the dimensions");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "P5\n";
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "# range " << textio::fmt(vmin) << " " << textio::fmt(vmax) << "\n";
  out << nx << " " << ny << "\n65535\n";

  double span = vmax - vmin;
  for (double v : values) {
    double u = 0.0;
    if (span > 0 && std::isfinite(v)) u = (v - vmin) / span;
    if (u < 0) u = 0;
    if (u > 1) u = 1;
    auto q = static_cast<unsigned>(std::lround(u * 65535.0));
    out.put(static_cast<char>((q >> 8) & 0xff));  // most significant byte first
    out.put(static_cast<char>(q & 0xff));
  }
  if (!out.good()) throw ConfigError("write failed for '" + path + "'");
}

void write_pgm16(const std::string& path, int nx, int ny,
                 const std::vector<double>& values,
                 const std::vector<std::string>& comments) {
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  for (double v : values)
    if (std::isfinite(v)) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  if (!(vmin <= vmax)) vmin = vmax = 0.0;  // no finite values
  write_pgm16(path, nx, ny, values, vmin, vmax, comments);
}

Pgm16 read_pgm16(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");

  // Header tokens: "P5", width, height, maxval; '#' comments may appear
  // between them. A single whitespace byte follows maxval before the pixels.
  auto next_token = [&]() -> std::string {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        if (!tok.empty()) return tok;
        continue;
      }
      tok.push_back(c);
    }
    return tok;
  };

  if (next_token() != "P5") throw ParseError(path + ": not a binary PGM (P5) file");
  auto int_token = [&](const char* what) {
    std::string tok = next_token();
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != tok.size())
      throw ParseError(path + ": malformed PGM " + std::string(what));
    return v;
  };
  Pgm16 img;
  img.nx = int_token("width");
  img.ny = int_token("height");
  int maxval = int_token("maxval");
  if (maxval != 65535)
    throw ParseError(path + ": expected 16-bit maxval 65535, got " +
                     std::to_string(maxval));
  if (img.nx <= 0 || img.ny <= 0) throw ParseError(path + ": bad PGM dimensions");

  std::size_t n = static_cast<std::size_t>(img.nx) * img.ny;
  img.pixels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int hi = in.get(), lo = in.get();
    if (hi < 0 || lo < 0) throw ParseError(path + ": truncated pixel data");
    img.pixels[i] = static_cast<std::uint16_t>((hi << 8) | lo);
  }
  return img;
}

}  // namespace dmet
