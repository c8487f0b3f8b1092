#include <iostream>

#include <CLI11.hpp>

#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Endemic model with distributed delays: simulation and convergence studies"};
  app.set_version_flag("--version", std::string(ENDEMIC_DELAY_VERSION));

  std::string config_path;
  std::string mode;
  std::string out_dir;
  bool quiet = false;
  app.add_option("-c,--config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
  app.add_option("-m,--mode", mode,
                 "Override experiment.mode: simulate-discrete, simulate-reference, simulate-oracle, converge, bench, "
                 "kernel-check");
  app.add_option("-o,--out", out_dir, "Output directory (overrides ENDEMIC_DELAY_OUT and experiment.out_dir)");
  app.add_flag("-q,--quiet", quiet, "Only report errors");
  CLI11_PARSE(app, argc, argv);

  edelay::cli::RunOptions options;
  options.quiet = quiet;
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (!mode.empty()) {
    try {
      options.mode = edelay::cli::parse_mode(mode);
    } catch (const std::exception& e) {
      std::cerr << "config error: --mode: " << e.what() << '\n';
      return 2;
    }
  }
  return edelay::cli::run_from_file(config_path, options, std::cout, std::cerr);
}
