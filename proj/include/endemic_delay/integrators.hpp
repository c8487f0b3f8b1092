#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "endemic_delay/kernels.hpp"
#include "endemic_delay/model.hpp"
#include "endemic_delay/trajectory.hpp"

namespace edelay {

/// Raised when a solve produces non-finite values or breaks conservation.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultStep = 0.01;
inline constexpr double kConservationTolerance = 1e-9;

/// Discrete-lag model: the kernel integrals are replaced by the combs.
/// Fixed-step classical RK4 on [0, t_end]; lagged terms are read from the
/// Hermite dense output of the trajectory built so far. Requires
/// step <= (smallest comb node) / 4 so no lookup ever extrapolates.
Trajectory solve_discrete(const ModelParams& params, const HistoryData& hist, const DiracComb& comb_rho,
                          const DiracComb& comb_tau, double t_end, double step = kDefaultStep);

namespace detail {

/// Number of steps for [0, t_end]; the last step is shortened when t_end is
/// not a multiple of step.
std::size_t step_count(double t_end, double step);

void check_step(double t_end, double step, double min_lag, std::string_view who);

/// Method of steps with RK4. rhs(t, y, past) may read `past` at any time not
/// later than the last accepted knot. The first six components are the
/// compartments, whose sum is checked against its initial value each step.
template <std::size_t W, class Rhs>
Trajectory integrate_rk4(const std::array<double, W>& y0, const HistoryData& prehistory,
                         std::vector<std::string> aux_names, double t_end, double step, Rhs&& rhs,
                         std::string_view who) {
  static_assert(W >= kNumCompartments);
  using Vec = std::array<double, W>;
  Trajectory traj(prehistory, std::move(aux_names));
  if (traj.width() != W) throw std::logic_error("integrate_rk4: auxiliary name count does not match width");

  const std::size_t n = step_count(t_end, step);
  auto population = [](const Vec& y) {
    double s = 0.0;
    for (std::size_t c = 0; c < kNumCompartments; ++c) s += y[c];
    return s;
  };
  const double n0 = population(y0);
  auto check = [&](double t, const Vec& y, const Vec& dy) {
    for (std::size_t c = 0; c < W; ++c) {
      if (!std::isfinite(y[c]) || !std::isfinite(dy[c])) {
        throw SolverError(std::string(who) + ": non-finite value in component " + std::to_string(c) +
                          " at t = " + std::to_string(t));
      }
    }
    const double drift = std::abs(population(y) - n0);
    if (n0 > 0.0 && drift > kConservationTolerance * n0) {
      throw SolverError(std::string(who) + ": population drift " + std::to_string(drift / n0) +
                        " exceeds tolerance at t = " + std::to_string(t));
    }
  };

  Vec y = y0;
  Vec k1 = rhs(0.0, y, static_cast<const Trajectory&>(traj));
  check(0.0, y, k1);
  traj.append(0.0, y, k1);

  Vec tmp;
  double t = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    const double t_next = (m == n) ? t_end : static_cast<double>(m) * step;
    const double h = t_next - t;
    const double half = 0.5 * h;
    for (std::size_t c = 0; c < W; ++c) tmp[c] = y[c] + half * k1[c];
    const Vec k2 = rhs(t + half, tmp, static_cast<const Trajectory&>(traj));
    for (std::size_t c = 0; c < W; ++c) tmp[c] = y[c] + half * k2[c];
    const Vec k3 = rhs(t + half, tmp, static_cast<const Trajectory&>(traj));
    for (std::size_t c = 0; c < W; ++c) tmp[c] = y[c] + h * k3[c];
    const Vec k4 = rhs(t_next, tmp, static_cast<const Trajectory&>(traj));
    for (std::size_t c = 0; c < W; ++c) y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);

    t = t_next;
    // Derivative at the new knot doubles as the next step's first stage.
    k1 = rhs(t, y, static_cast<const Trajectory&>(traj));
    check(t, y, k1);
    traj.append(t, y, k1);
  }
  return traj;
}

}  // namespace detail
}  // namespace edelay
