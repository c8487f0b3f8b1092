#include "endemic_delay/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "endemic_delay/integrators.hpp"
#include "endemic_delay/reference.hpp"

namespace edelay {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> sample_grid(double t0, double t1, double grid_step) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("error grid step must be > 0");
  if (!(t1 >= t0)) throw std::invalid_argument("error window must satisfy t0 <= t1");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / grid_step + 1e-9));
  grid.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) grid.push_back(t0 + static_cast<double>(k) * grid_step);
  if (t1 - grid.back() > 1e-9 * grid_step) grid.push_back(t1);
  grid.back() = std::min(grid.back(), t1);
  return grid;
}

void check_window(const Trajectory& traj, double t1, const char* which) {
  if (traj.empty() || t1 > traj.t_end() * (1.0 + 1e-12)) {
    throw std::out_of_range(std::string("sup_norm_error: window exceeds trajectory ") + which);
  }
}

}  // namespace

CompartmentErrors sup_norm_error(const Trajectory& a, const Trajectory& b, double t0, double t1, double grid_step) {
  check_window(a, t1, "a");
  check_window(b, t1, "b");
  CompartmentErrors err{};
  for (double t : sample_grid(t0, t1, grid_step)) {
    const auto sa = a.sample(t);
    const auto sb = b.sample(t);
    for (std::size_t c = 0; c < kNumCompartments; ++c) {
      err[c] = std::max(err[c], std::abs(a.at(sa, c) - b.at(sb, c)));
    }
  }
  return err;
}

CompartmentErrors peak_values(const Trajectory& a, double t0, double t1, double grid_step) {
  check_window(a, t1, "a");
  CompartmentErrors peak{};
  for (double t : sample_grid(t0, t1, grid_step)) {
    const auto s = a.sample(t);
    for (std::size_t c = 0; c < kNumCompartments; ++c) peak[c] = std::max(peak[c], std::abs(a.at(s, c)));
  }
  return peak;
}

std::string_view to_string(ReferenceKind kind) {
  return kind == ReferenceKind::ChainOracle ? "chain-oracle" : "quadrature";
}

ReferenceKind parse_reference_kind(std::string_view name) {
  if (name == "chain-oracle" || name == "chain") return ReferenceKind::ChainOracle;
  if (name == "quadrature") return ReferenceKind::Quadrature;
  throw std::invalid_argument("unknown reference solver '" + std::string(name) + "'");
}

Trajectory solve_reference_kind(const ExperimentSetup& setup, ReferenceKind kind) {
  if (kind == ReferenceKind::ChainOracle) {
    return solve_chain_oracle(setup.params, setup.history, setup.phi, setup.psi, setup.t_end, setup.step);
  }
  return solve_reference(setup.params, setup.history, setup.phi, setup.psi, setup.t_end, setup.step);
}

Trajectory solve_discrete_pair(const ExperimentSetup& setup, LagPair pair) {
  const DiracComb rho = discretize(setup.phi, setup.phi_truncation, pair.n_rho, setup.node_rule);
  const DiracComb tau = discretize(setup.psi, setup.psi_truncation, pair.n_tau, setup.node_rule);
  return solve_discrete(setup.params, setup.history, rho, tau, setup.t_end, setup.step);
}

ConvergenceReport convergence_sweep(const ExperimentSetup& setup, std::span<const LagPair> pairs,
                                    SweepOptions options) {
  const auto start = Clock::now();
  auto reference = std::make_shared<const Trajectory>(solve_reference_kind(setup, setup.reference));
  ReferenceMeta meta{setup.reference, setup.step, setup.t_end, seconds_since(start)};
  return convergence_sweep(setup, pairs, std::move(reference), meta, options);
}

ConvergenceReport convergence_sweep(const ExperimentSetup& setup, std::span<const LagPair> pairs,
                                    std::shared_ptr<const Trajectory> reference, ReferenceMeta meta,
                                    SweepOptions options) {
  if (!reference) throw std::invalid_argument("convergence_sweep: missing reference trajectory");
  ConvergenceReport report;
  report.reference = meta;
  const CompartmentErrors peak = peak_values(*reference, 0.0, setup.t_end, setup.error_grid);

  std::vector<SweepEntry> slots(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < pairs.size(); k = next++) {
      SweepEntry& entry = slots[k];
      entry.pair = pairs[k];
      try {
        const auto start = Clock::now();
        auto traj = std::make_shared<const Trajectory>(solve_discrete_pair(setup, pairs[k]));
        entry.wall_seconds = seconds_since(start);
        entry.sup_err = sup_norm_error(*traj, *reference, 0.0, setup.t_end, setup.error_grid);
        for (std::size_t c = 0; c < kNumCompartments; ++c) {
          entry.rel_sup_err[c] = peak[c] > 0.0 ? entry.sup_err[c] / peak[c] : entry.sup_err[c];
        }
        if (options.keep_trajectories) entry.trajectory = std::move(traj);
      } catch (const std::exception& e) {
        entry.failure = e.what();
        entry.sup_err.fill(std::nan(""));
        entry.rel_sup_err.fill(std::nan(""));
      }
    }
  };

  unsigned threads = setup.threads ? setup.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, pairs.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  std::stable_sort(slots.begin(), slots.end(),
                   [](const SweepEntry& a, const SweepEntry& b) { return a.pair < b.pair; });
  report.entries = std::move(slots);
  if (options.keep_trajectories) report.reference_trajectory = std::move(reference);
  return report;
}

double observed_order(std::span<const double> n, std::span<const double> error) {
  if (n.size() != error.size() || n.size() < 2) throw std::invalid_argument("observed_order: need >= 2 matched points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (!(n[k] > 0.0 && error[k] > 0.0)) throw std::invalid_argument("observed_order: values must be positive");
    const double x = std::log(n[k]);
    const double y = -std::log(error[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(n.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<TimingRow> benchmark(const ExperimentSetup& setup, const BenchmarkOptions& options) {
  if (options.repeats == 0) throw std::invalid_argument("benchmark: repeats must be >= 1");
  std::vector<TimingRow> rows;
  auto time_best = [&](const std::function<void()>& run) {
    for (unsigned k = 0; k < options.warmup; ++k) run();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned k = 0; k < options.repeats; ++k) {
      const auto start = Clock::now();
      run();
      best = std::min(best, seconds_since(start));
    }
    return best;
  };

  for (double horizon : options.horizons) {
    ExperimentSetup s = setup;
    s.t_end = horizon;
    const DiracComb rho = discretize(s.phi, s.phi_truncation, options.pair.n_rho, s.node_rule);
    const DiracComb tau = discretize(s.psi, s.psi_truncation, options.pair.n_tau, s.node_rule);
    rows.push_back({"discrete", options.pair, horizon, s.step, time_best([&] {
                      (void)solve_discrete(s.params, s.history, rho, tau, s.t_end, s.step);
                    })});
    rows.push_back({"chain-oracle", {}, horizon, s.step, time_best([&] {
                      (void)solve_chain_oracle(s.params, s.history, s.phi, s.psi, s.t_end, s.step);
                    })});
    if (options.include_quadrature) {
      rows.push_back({"quadrature", {}, horizon, s.step, time_best([&] {
                        (void)solve_reference(s.params, s.history, s.phi, s.psi, s.t_end, s.step);
                      })});
    }
  }
  return rows;
}

}  // namespace edelay
