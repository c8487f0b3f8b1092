#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace edelay::cli {

/// Environment variable that overrides experiment.out_dir (but not --out).
inline constexpr const char* kOutDirEnv = "ENDEMIC_DELAY_OUT";

struct RunOptions {
  std::optional<Mode> mode;
  std::optional<std::filesystem::path> out_dir;
  bool quiet = false;
};

/// Files written by a run, relative to the output directory.
struct RunResult {
  std::filesystem::path out_dir;
  std::vector<std::string> files;
};

RunResult run(RunConfig config, const RunOptions& options, std::ostream& log);

/// Loads, validates and runs; prints a diagnostic and returns nonzero on
/// failure (2 for config problems, 1 otherwise).
int run_from_file(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& log,
                  std::ostream& err);

enum class TestFunction { Square, Decay };

/// Integral of fn over [support_lo, truncation] against the kernel density.
double truncated_integral(const KernelDensity& kernel, double truncation, TestFunction fn);

}  // namespace edelay::cli
