#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "endemic_delay/endemic_delay.hpp"

namespace edelay::cli {

enum class Mode { SimulateDiscrete, SimulateReference, SimulateOracle, Converge, Bench, KernelCheck };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);

/// A malformed or invalid config entry; key is the dotted path ("model.gamma").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct KernelBlock {
  KernelDensity kernel = KernelDensity::shifted_exponential(10.0, 0.1);
  double truncation = 86.0;
  std::size_t cells = 20;
  NodeRule node_rule = NodeRule::Midpoint;
};

struct RunConfig {
  ModelParams params = ModelParams::baseline();
  HistoryData history{10.0, {}};
  KernelBlock phi;
  KernelBlock psi{KernelDensity::shifted_exponential(5.0, 0.2), 86.0, 10, NodeRule::Midpoint};
  double step = 0.01;
  double t_end = 365.0;
  std::size_t output_stride = 10;

  Mode mode = Mode::Converge;
  std::vector<LagPair> pairs{{1, 2}, {10, 20}, {100, 200}};
  std::filesystem::path out_dir = "out";
  ReferenceKind reference = ReferenceKind::ChainOracle;
  unsigned threads = 0;
  std::vector<double> bench_horizons{90.0, 180.0, 365.0};
  unsigned bench_repeats = 3;
  bool bench_quadrature = true;
  std::vector<std::size_t> check_cells{2, 4, 8, 16, 32, 64, 128, 256};

  /// Raw config text, fingerprinted into the run manifest.
  std::string source_text;

  ExperimentSetup experiment() const;
};

/// Parses INI text. Missing keys keep the baseline defaults above.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Checks every precondition the selected mode will hit, before any solve.
void validate(const RunConfig& config);

}  // namespace edelay::cli
