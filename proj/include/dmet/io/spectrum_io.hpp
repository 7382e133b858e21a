#pragma once

#include <string>
#include <vector>

#include "dmet/types.hpp"

namespace dmet {

// Read a two-column text spectrum: bin-center energy [keV] and counts per
// row, comma or whitespace separated, '#' starts a comment. Bin edges are
// reconstructed from the uniform centers. Non-monotone or non-uniform
// energies, negative counts, and ragged rows raise ParseError with the
// offending line number; fewer than two rows -> InsufficientDataError.
Spectrum parse_spectrum_file(const std::string& path);

// Same grammar, reading from a string (the file parser's core).
Spectrum parse_spectrum_text(const std::string& text, const std::string& origin);

// Inverse writer: '#' header, then one "energy_keV,counts" row per bin with
// 17 significant digits. Extra header comments may be supplied (one line
// each, without the leading '#').
void write_spectrum_file(const std::string& path, const Spectrum& spectrum,
                         const std::vector<std::string>& comments = {});

std::string spectrum_to_text(const Spectrum& spectrum,
                             const std::vector<std::string>& comments = {});

}  // namespace dmet
