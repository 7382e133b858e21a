#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dmet/errors.hpp"
#include "dmet/io/config.hpp"
#include "dmet/io/pipeline.hpp"
#include "dmet/io/scan_io.hpp"

namespace {

std::string subcommand_list() {
  std::string all;
  for (const std::string& s : dmet::pipeline_subcommands())
    all += (all.empty() ? "" : ", ") + s;
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta-metrology: delta-layer dopant metrology toolkit"};
  app.get_formatter()->column_width(28);

  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;
  int threads = 0;
  bool seed_set = false, out_set = false, threads_set = false, format_set = false;

  app.add_option("subcommand", subcommand, "one of: " + subcommand_list())->required();
  app.add_option("--config", config_path, "run configuration JSON file");
  app.add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--out", out_dir, "override the config output directory")
      ->each([&](const std::string&) { out_set = true; });
  app.add_option("--threads", threads,
                 "worker threads (0 = hardware concurrency); overrides the "
                 "DELTA_METROLOGY_THREADS environment variable and the config")
      ->each([&](const std::string&) { threads_set = true; });
  app.add_option("--format", format, "scan container format: csv | packed")
      ->each([&](const std::string&) { format_set = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    dmet::RunConfig config = config_path.empty() ? dmet::default_run_config()
                                                 : dmet::load_run_config(config_path);
    if (seed_set) config.seed = seed;
    if (out_set) config.output_dir = out_dir;
    if (format_set) {
      dmet::parse_scan_format(format);
      config.format = format;
    }
    if (threads_set) {
      config.threads = threads;
    } else if (const char* env = std::getenv("DELTA_METROLOGY_THREADS")) {
      try {
        config.threads = std::stoi(env);
      } catch (const std::exception&) {
        throw dmet::ConfigError(
            "DELTA_METROLOGY_THREADS: expected an integer, got '" + std::string(env) +
            "'");
      }
    }

    dmet::PipelineResult result = dmet::run_pipeline(config, subcommand);
    if (result.exit_code == 0) {
      std::cout << subcommand << ": ok";
    } else {
      const auto& err = result.report.at("error");
      std::cout << subcommand << ": " << err.at("class").get<std::string>() << " error: "
                << err.at("message").get<std::string>();
    }
    if (!result.written.empty()) std::cout << " -> " << result.written.back();
    std::cout << "\n";
    return result.exit_code;
  } catch (const dmet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
