#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "endemic_delay/kernels.hpp"
#include "endemic_delay/model.hpp"
#include "endemic_delay/trajectory.hpp"

namespace edelay {

using CompartmentErrors = std::array<double, kNumCompartments>;

inline constexpr double kDefaultErrorGrid = 0.1;

/// Max over t = t0, t0 + grid_step, ..., t1 of |a(t) - b(t)| per compartment.
CompartmentErrors sup_norm_error(const Trajectory& a, const Trajectory& b, double t0, double t1,
                                 double grid_step = kDefaultErrorGrid);

/// Max over the same grid of |a(t)| per compartment.
CompartmentErrors peak_values(const Trajectory& a, double t0, double t1, double grid_step = kDefaultErrorGrid);

enum class ReferenceKind { ChainOracle, Quadrature };
std::string_view to_string(ReferenceKind kind);
ReferenceKind parse_reference_kind(std::string_view name);

/// Everything a convergence or timing experiment needs. Defaults reproduce
/// the baseline setting: shifted-exponential kernels (sigma = 10, rate 0.1;
/// theta = 5, rate 0.2) truncated at 86 days, c_I = 10, one year at step 0.01.
struct ExperimentSetup {
  ModelParams params = ModelParams::baseline();
  HistoryData history{10.0, {}};
  KernelDensity phi = KernelDensity::shifted_exponential(10.0, 0.1);
  KernelDensity psi = KernelDensity::shifted_exponential(5.0, 0.2);
  double phi_truncation = 86.0;
  double psi_truncation = 86.0;
  NodeRule node_rule = NodeRule::Midpoint;
  double t_end = 365.0;
  double step = 0.01;
  double error_grid = kDefaultErrorGrid;
  ReferenceKind reference = ReferenceKind::ChainOracle;
  /// Worker threads for sweeps; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct LagPair {
  std::size_t n_tau = 0;
  std::size_t n_rho = 0;
  auto operator<=>(const LagPair&) const = default;
};

Trajectory solve_reference_kind(const ExperimentSetup& setup, ReferenceKind kind);
Trajectory solve_discrete_pair(const ExperimentSetup& setup, LagPair pair);

struct SweepEntry {
  LagPair pair;
  CompartmentErrors sup_err{};
  /// sup_err divided by the reference's peak of the same compartment.
  CompartmentErrors rel_sup_err{};
  double wall_seconds = 0.0;
  /// Empty on success; otherwise the solver's diagnostic.
  std::string failure;
  std::shared_ptr<const Trajectory> trajectory;

  bool ok() const noexcept { return failure.empty(); }
};

struct ReferenceMeta {
  ReferenceKind kind = ReferenceKind::ChainOracle;
  double step = 0.0;
  double t_end = 0.0;
  double wall_seconds = 0.0;
};

struct ConvergenceReport {
  std::vector<SweepEntry> entries;  // sorted by (n_tau, n_rho)
  ReferenceMeta reference;
  std::shared_ptr<const Trajectory> reference_trajectory;
};

struct SweepOptions {
  bool keep_trajectories = false;
};

/// One reference run, then one discrete run per pair (in parallel), each
/// compared with the shared reference. A failed pair is recorded in its entry.
ConvergenceReport convergence_sweep(const ExperimentSetup& setup, std::span<const LagPair> pairs,
                                    SweepOptions options = {});

/// Same, against an already computed reference.
ConvergenceReport convergence_sweep(const ExperimentSetup& setup, std::span<const LagPair> pairs,
                                    std::shared_ptr<const Trajectory> reference, ReferenceMeta meta,
                                    SweepOptions options = {});

/// Least-squares slope of -log(error) against log(n).
double observed_order(std::span<const double> n, std::span<const double> error);

struct BenchmarkOptions {
  std::vector<double> horizons{365.0};
  LagPair pair{100, 200};
  unsigned repeats = 3;
  unsigned warmup = 1;
  bool include_quadrature = true;
};

struct TimingRow {
  std::string solver;  // "discrete", "chain-oracle" or "quadrature"
  LagPair pair;        // meaningful for "discrete" only
  double t_end = 0.0;
  double step = 0.0;
  double best_seconds = 0.0;
};

/// Wall clock of each solver family at each horizon, sequentially:
/// `warmup` discarded runs, then the best of `repeats`.
std::vector<TimingRow> benchmark(const ExperimentSetup& setup, const BenchmarkOptions& options = {});

}  // namespace edelay
