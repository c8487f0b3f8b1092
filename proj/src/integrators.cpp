#include "endemic_delay/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace edelay {

namespace detail {

std::size_t step_count(double t_end, double step) {
  const double ratio = t_end / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(ratio));
}

void check_step(double t_end, double step, double min_lag, std::string_view who) {
  const std::string w(who);
  if (!(std::isfinite(t_end) && t_end > 0.0)) throw std::invalid_argument(w + ": t_end must be > 0");
  if (!(std::isfinite(step) && step > 0.0)) throw std::invalid_argument(w + ": step must be > 0");
  if (!(step <= min_lag / 4.0)) {
    throw std::invalid_argument(w + ": step " + std::to_string(step) + " exceeds a quarter of the smallest lag " +
                                std::to_string(min_lag));
  }
}

}  // namespace detail

namespace {

// Hermite stencil of one lag at a fixed phase of the step: on a uniform grid
// t - lag always falls at the same offset from the current knot.
struct LagStencil {
  std::ptrdiff_t offset = 0;  // left knot relative to the knot at or below t
  double h00 = 1.0, h10 = 0.0, h01 = 0.0, h11 = 0.0;
};

LagStencil make_stencil(double phase, double lag, double h) {
  const double q = phase - lag / h;
  const double j = std::floor(q);
  const double u = q - j;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return {static_cast<std::ptrdiff_t>(j), 2.0 * u3 - 3.0 * u2 + 1.0, h * (u3 - 2.0 * u2 + u), -2.0 * u3 + 3.0 * u2,
          h * (u3 - u2)};
}

class DiscreteLagRhs {
 public:
  DiscreteLagRhs(const ModelParams& params, const DiracComb& rho, const DiracComb& tau, double c_s, double c_i,
                 double step)
      : params_(params),
        rho_(rho),
        tau_(tau),
        c_i_(c_i),
        history_incidence_(params.beta0() * c_i * c_s),
        step_(step),
        lagged_i_(rho.size()),
        lagged_inc_(tau.size()) {
    for (double phase : {0.0, 0.5}) {
      auto& table = stencils_[phase == 0.0 ? 0 : 1];
      for (double lag : rho.nodes) table.rho.push_back(make_stencil(phase, lag, step));
      for (double lag : tau.nodes) table.tau.push_back(make_stencil(phase, lag, step));
    }
  }

  std::array<double, kNumCompartments> operator()(double t, const std::array<double, kNumCompartments>& y,
                                                  const Trajectory& past) {
    const double x = t / step_;
    const double whole = std::floor(x + 1e-9);
    const double frac = x - whole;
    if (frac < 1e-9) {
      fill_from_stencils(stencils_[0], static_cast<std::ptrdiff_t>(whole), t, past);
    } else if (std::abs(frac - 0.5) < 1e-9) {
      fill_from_stencils(stencils_[1], static_cast<std::ptrdiff_t>(whole), t, past);
    } else {
      fill_generic(t, past);  // shortened final step
    }
    const auto dx = rhs_discrete(t, CompartmentState::from_array(y), lagged_i_, rho_.weights, lagged_inc_,
                                 tau_.weights, params_);
    return dx.to_array();
  }

 private:
  static constexpr std::size_t kS = index(Compartment::S);
  static constexpr std::size_t kI = index(Compartment::I);

  struct Tables {
    std::vector<LagStencil> rho;
    std::vector<LagStencil> tau;
  };

  static double apply(const Trajectory& past, const LagStencil& st, std::size_t k, std::size_t comp) {
    if (st.h01 == 0.0 && st.h11 == 0.0) return past.value(k, comp);
    return st.h00 * past.value(k, comp) + st.h10 * past.derivative(k, comp) + st.h01 * past.value(k + 1, comp) +
           st.h11 * past.derivative(k + 1, comp);
  }

  void fill_from_stencils(const Tables& table, std::ptrdiff_t knot, double t, const Trajectory& past) {
    for (std::size_t k = 0; k < table.rho.size(); ++k) {
      const std::ptrdiff_t left = knot + table.rho[k].offset;
      lagged_i_[k] = left < 0 ? c_i_ : apply(past, table.rho[k], static_cast<std::size_t>(left), kI);
    }
    for (std::size_t k = 0; k < table.tau.size(); ++k) {
      const std::ptrdiff_t left = knot + table.tau[k].offset;
      if (left < 0) {
        lagged_inc_[k] = history_incidence_;
      } else {
        const auto at = static_cast<std::size_t>(left);
        lagged_inc_[k] = params_.beta(t - tau_.nodes[k]) * apply(past, table.tau[k], at, kI) *
                         apply(past, table.tau[k], at, kS);
      }
    }
  }

  void fill_generic(double t, const Trajectory& past) {
    for (std::size_t k = 0; k < rho_.size(); ++k) {
      lagged_i_[k] = past.at(past.sample(t - rho_.nodes[k]), kI);
    }
    for (std::size_t k = 0; k < tau_.size(); ++k) {
      const double s = t - tau_.nodes[k];
      if (s < 0.0) {
        lagged_inc_[k] = history_incidence_;
      } else {
        const auto at = past.sample(s);
        lagged_inc_[k] = params_.beta(s) * past.at(at, kI) * past.at(at, kS);
      }
    }
  }

  const ModelParams& params_;
  const DiracComb& rho_;
  const DiracComb& tau_;
  double c_i_;
  double history_incidence_;
  double step_;
  Tables stencils_[2];
  std::vector<double> lagged_i_;
  std::vector<double> lagged_inc_;
};

}  // namespace

Trajectory solve_discrete(const ModelParams& params, const HistoryData& hist, const DiracComb& comb_rho,
                          const DiracComb& comb_tau, double t_end, double step) {
  params.validate();
  if (comb_rho.size() == 0 || comb_tau.size() == 0) throw std::invalid_argument("solve_discrete: empty comb");
  const double min_lag = std::min(comb_rho.min_node(), comb_tau.min_node());
  detail::check_step(t_end, step, min_lag, "solve_discrete");

  const CompartmentState x0 = initial_conditions(params, hist, comb_tau.first_moment(), comb_rho.first_moment());
  HistoryData resolved = hist;
  resolved.c_s = hist.susceptible(x0.s);

  DiscreteLagRhs rhs(params, comb_rho, comb_tau, *resolved.c_s, resolved.c_i, step);
  return detail::integrate_rk4<kNumCompartments>(x0.to_array(), resolved, {}, t_end, step, rhs, "solve_discrete");
}

}  // namespace edelay
