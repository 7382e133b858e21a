#pragma once

#include <string>
#include <vector>

#include "dmet/io/config.hpp"
#include "dmet/io/report.hpp"

namespace dmet {

struct PipelineResult {
  int exit_code = 0;          // 0 ok, 2 parse, 3 fit, 4 calibration, 5 config
  OrderedJson report;         // the document written to <output_dir>/report.json
  std::vector<std::string> written;  // artifact paths, report last
};

// All valid subcommands, in documentation order.
const std::vector<std::string>& pipeline_subcommands();

// Execute one subcommand: run the corresponding module operations, write the
// artifact files and the report under config.output_dir, and map any module
// error to its exit code. Errors never propagate as exceptions; they land in
// the report as a structured record {class, message, exit_code}. Identical
// config + seed give byte-identical machine-readable outputs for any thread
// count.
PipelineResult run_pipeline(const RunConfig& config, const std::string& subcommand);

}  // namespace dmet
