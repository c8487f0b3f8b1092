#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "endemic_delay/harness.hpp"
#include "endemic_delay/kernels.hpp"
#include "endemic_delay/trajectory.hpp"

namespace edelay::io {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

/// Extra CSV column computed per knot index.
struct Column {
  std::string name;
  std::function<double(std::size_t knot)> value;
};

/// Header `t,S,L,I,RT,RP,D,N` followed by any extra columns; every
/// `stride`-th knot plus the final one.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, std::size_t stride,
                          std::span<const Column> extra = {});

/// Header `node,weight`.
void write_comb_csv(std::ostream& out, const DiracComb& comb);

/// Header `n_tau,n_rho,err_S,err_L,err_I,err_RT,err_RP,err_D,rel_err_I,wall_ms,status`.
/// Without timing the wall_ms column is dropped, making the file reproducible.
/// status is "ok" or the failure message (nan errors) of that pair.
void write_report_csv(std::ostream& out, const ConvergenceReport& report, bool include_timing = true);

/// Header `solver,n_tau,n_rho,t_end,step,best_ms`.
void write_timing_csv(std::ostream& out, std::span<const TimingRow> rows);

/// Writes to a temporary sibling and renames it over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// 64-bit FNV-1a, used for config fingerprints in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace edelay::io
