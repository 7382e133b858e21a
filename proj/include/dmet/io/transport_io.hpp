#pragma once

#include <string>
#include <vector>

#include "dmet/wl.hpp"

namespace dmet {

// Read a magnetotransport trace. Header lines hold key=value tokens
// (whitespace separated, several per line allowed):
//   orientation=perpendicular|parallel|tilt   (required)
//   quantity=delta_sigma|r_xy                 (default delta_sigma)
//   temperature_K=<v>                         (default 0)
//   angle=<deg>          fixed tilt angle; field swept in column 1
//   sweep=angle B_T=<v>  angle swept in column 1 at fixed field magnitude
// Data rows are comma or whitespace separated: (B_T | angle_deg), value,
// optional positive error. '#' starts a comment. Missing orientation or a
// malformed row -> ParseError with line number; fewer than 5 points ->
// InsufficientDataError.
MagnetoTrace parse_transport_file(const std::string& path);

MagnetoTrace parse_transport_text(const std::string& text, const std::string& origin);

// Inverse writer. Tilt traces with varying angles are written in the
// sweep=angle form; constant-angle tilt traces use angle=<deg>.
void write_transport_file(const std::string& path, const MagnetoTrace& trace,
                          const std::vector<std::string>& comments = {});

std::string transport_to_text(const MagnetoTrace& trace,
                              const std::vector<std::string>& comments = {});

}  // namespace dmet
