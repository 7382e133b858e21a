#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dmet {

// 16-bit grayscale image, row-major, top row first.
struct Pgm16 {
  int nx = 0, ny = 0;
  std::vector<std::uint16_t> pixels;
};

// Write binary PGM (P5, maxval 65535, most significant byte first). Values
// are scaled linearly from [vmin, vmax] to [0, 65535] and clamped; the range
// is recorded in a '#' comment so the scaling stays invertible. A flat or
// empty range maps everything to 0. Comments must be single lines.
void write_pgm16(const std::string& path, int nx, int ny,
                 const std::vector<double>& values, double vmin, double vmax,
                 const std::vector<std::string>& comments = {});

// Auto-ranged overload: vmin/vmax from the finite extremes of `values`.
void write_pgm16(const std::string& path, int nx, int ny,
                 const std::vector<double>& values,
                 const std::vector<std::string>& comments = {});

// Inverse reader for the P5/65535 files this writer produces.
Pgm16 read_pgm16(const std::string& path);

}  // namespace dmet
