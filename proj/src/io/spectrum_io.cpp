#include "dmet/io/spectrum_io.hpp"

#include <cmath>
#include <sstream>

#include "dmet/errors.hpp"
#include "dmet/io/report.hpp"
#include "text_util.hpp"

namespace dmet {

using textio::fmt;

Spectrum parse_spectrum_text(const std::string& text, const std::string& origin) {
  std::vector<double> centers, counts;
  std::vector<int> row_line;  // source line of each data row, for diagnostics

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = textio::strip_comment(line);
    if (body.empty()) continue;
    auto fields = textio::split_fields(body);
    if (fields.size() != 2)
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 2 columns, got " +
                       std::to_string(fields.size()));
    double energy, count;
    if (!textio::parse_double(fields[0], energy) || !textio::parse_double(fields[1], count))
      throw ParseError(origin + ":" + std::to_string(line_no) + ": non-numeric field");
    if (!std::isfinite(energy) || !std::isfinite(count))
      throw ParseError(origin + ":" + std::to_string(line_no) + ": non-finite value");
    if (count < 0)
      throw ParseError(origin + ":" + std::to_string(line_no) + ": negative count");
    centers.push_back(energy);
    counts.push_back(count);
    row_line.push_back(line_no);
  }

  const std::size_t n = centers.size();
  if (n < 2)
    throw InsufficientDataError(origin + ": " + std::to_string(n) +
                                " data rows; at least 2 are needed to infer the bin width");
  for (std::size_t i = 1; i < n; ++i)
    if (centers[i] <= centers[i - 1])
      throw ParseError(origin + ":" + std::to_string(row_line[i]) +
                       ": energies must increase monotonically");

  // Reconstruct the uniform bin grid from the centers.
  double width = (centers.back() - centers.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(centers[i] - centers[i - 1] - width) > 1e-6 * width)
      throw ParseError(origin + ":" + std::to_string(row_line[i]) +
                       ": non-uniform bin centers");

  Spectrum spectrum;
  spectrum.bin_edges_keV.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    spectrum.bin_edges_keV[i] = centers.front() + (static_cast<double>(i) - 0.5) * width;
  spectrum.counts = std::move(counts);
  spectrum.validate();
  return spectrum;
}

Spectrum parse_spectrum_file(const std::string& path) {
  return parse_spectrum_text(read_text_file(path), path);
}

std::string spectrum_to_text(const Spectrum& spectrum,
                             const std::vector<std::string>& comments) {
  spectrum.validate();
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += "# energy_keV,counts\n";
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    out += fmt(spectrum.energy_at(i)) + "," + fmt(spectrum.counts[i]) + "\n";
  return out;
}

void write_spectrum_file(const std::string& path, const Spectrum& spectrum,
                         const std::vector<std::string>& comments) {
  write_text_file(path, spectrum_to_text(spectrum, comments));
}

}  // namespace dmet
