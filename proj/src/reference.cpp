#include "endemic_delay/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace edelay {

namespace {

void require_exponential(const KernelDensity& k, const char* who) {
  if (k.family() != KernelFamily::ShiftedExponential) {
    throw std::invalid_argument(std::string(who) + ": closed-form tails need shifted-exponential kernels, got " +
                                std::string(to_string(k.family())));
  }
}

}  // namespace

ConvolutionTerm make_g_term(const KernelDensity& phi, const HistoryData& resolved) {
  require_exponential(phi, "G term");
  return {ConvolutionKind::G, phi, resolved.c_i, phi.support_lo()};
}

ConvolutionTerm make_h_term(const KernelDensity& psi, double beta0, const HistoryData& resolved) {
  require_exponential(psi, "H term");
  if (!resolved.c_s) throw std::invalid_argument("H term: pre-history c_S must be resolved");
  return {ConvolutionKind::H, psi, beta0 * resolved.c_i * *resolved.c_s, psi.support_lo()};
}

ConvolutionQuadrature::ConvolutionQuadrature(ConvolutionTerm term, ContactRate beta)
    : term_(std::move(term)), beta_(std::move(beta)) {
  require_exponential(term_.kernel, "ConvolutionQuadrature");
  if (term_.kind == ConvolutionKind::H && !beta_) throw std::invalid_argument("ConvolutionQuadrature: H needs beta");
}

double ConvolutionQuadrature::integrand(const Trajectory& traj, const Trajectory::Sample& s, double time) const {
  const double inf = traj.at(s, index(Compartment::I));
  if (term_.kind == ConvolutionKind::G) return inf;
  return beta_(time) * inf * traj.at(s, index(Compartment::S));
}

void ConvolutionQuadrature::extend(const Trajectory& traj, std::size_t knots) {
  const auto& times = traj.times();
  const double rate = term_.kernel.rate();
  for (std::size_t k = knot_.size(); k < knots; ++k) {
    Trajectory::Sample at_knot;
    at_knot.k = k;  // h00 = 1: exact knot value
    knot_.push_back(integrand(traj, at_knot, times[k]));
  }
  for (std::size_t k = mid_.size(); k + 1 < knots; ++k) {
    const double width = times[k + 1] - times[k];
    const double mid = times[k] + 0.5 * width;
    mid_.push_back(integrand(traj, traj.sample(mid), mid));
    half_decay_.push_back(std::exp(-0.5 * rate * width));
    width_.push_back(width);
    if (uniform_cells_ == k && std::abs(width - width_[0]) <= 1e-9 * width_[0]) ++uniform_cells_;
  }
}

// Integral of integrand(s) * rate * exp(-rate (u - s)) over [0, t_K], where
// base = rate * exp(-rate (u - t_K)).
double ConvolutionQuadrature::knot_sum(std::size_t last_knot, double base) {
  const std::size_t K = last_knot;
  if (K == 0) return 0.0;

  if (K <= uniform_cells_) {
    // Composite Simpson as one dot product: knot k carries 2 exp(-rate (K-k) h),
    // midpoint k carries 4 exp(-rate (K-k-1/2) h), the two end knots carry 1.
    const double rate = term_.kernel.rate();
    const double h = width_[0];
    const std::size_t len = 2 * K + 1;
    while (weights_.size() < len) {
      const std::size_t m = weights_.size();
      weights_.push_back(std::exp(-rate * 0.5 * h * static_cast<double>(m)) * (m % 2 ? 4.0 : 2.0));
    }
    const double* w = weights_.data() + 2 * K;
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t k = 0;
    for (; k + 1 < K; k += 2) {
      acc0 += w[-2 * static_cast<std::ptrdiff_t>(k)] * knot_[k];
      acc1 += w[-2 * static_cast<std::ptrdiff_t>(k) - 1] * mid_[k];
      acc2 += w[-2 * static_cast<std::ptrdiff_t>(k) - 2] * knot_[k + 1];
      acc3 += w[-2 * static_cast<std::ptrdiff_t>(k) - 3] * mid_[k + 1];
    }
    for (; k < K; ++k) {
      acc0 += w[-2 * static_cast<std::ptrdiff_t>(k)] * knot_[k];
      acc1 += w[-2 * static_cast<std::ptrdiff_t>(k) - 1] * mid_[k];
    }
    double sum = (acc0 + acc2) + (acc1 + acc3) + weights_[0] * knot_[K];
    sum -= 0.5 * weights_[2 * K] * knot_[0];
    sum -= 0.5 * weights_[0] * knot_[K];
    return base * h / 6.0 * sum;
  }

  // General grid: walk backwards accumulating the decay.
  double sum = 0.0;
  double right = base;
  for (std::size_t k = K; k-- > 0;) {
    const double mid = right * half_decay_[k];
    const double left = mid * half_decay_[k];
    sum += width_[k] / 6.0 * (left * knot_[k] + 4.0 * mid * mid_[k] + right * knot_[k + 1]);
    right = left;
  }
  return sum;
}

double ConvolutionQuadrature::operator()(const Trajectory& traj, double t) {
  const double shift = term_.kernel.support_lo();
  const double rate = term_.kernel.rate();
  const double u = t - shift;
  if (u <= 0.0) return term_.prehistory_value;
  if (traj.empty() || u > traj.t_end() + 1e-12 * std::max(1.0, traj.t_end())) {
    throw std::out_of_range("convolution: trajectory does not reach t - shift = " + std::to_string(u));
  }
  extend(traj, traj.size());

  const auto& times = traj.times();
  const auto su = traj.sample(u);
  std::size_t K = su.k;
  if (K + 1 < times.size() && times[K + 1] <= u) ++K;
  const double tk = times[K];

  double integral = knot_sum(K, rate * std::exp(-rate * (u - tk)));
  if (u > tk) {
    const double width = u - tk;
    const double mid = tk + 0.5 * width;
    const double f0 = knot_[K];
    const double fm = integrand(traj, traj.sample(mid), mid);
    const double f1 = integrand(traj, su, u);
    integral += width / 6.0 * rate *
                (std::exp(-rate * width) * f0 + 4.0 * std::exp(-0.5 * rate * width) * fm + f1);
  }
  return integral + term_.prehistory_value * std::exp(-rate * u);
}

double eval_G(const Trajectory& traj, double t, const KernelDensity& phi) {
  ConvolutionQuadrature q(make_g_term(phi, traj.prehistory()));
  return q(traj, t);
}

double eval_H(const Trajectory& traj, double t, const KernelDensity& psi, const ContactRate& beta) {
  ConvolutionQuadrature q(make_h_term(psi, beta(0.0), traj.prehistory()), beta);
  return q(traj, t);
}

namespace {

struct Setup {
  CompartmentState x0;
  HistoryData resolved;
};

Setup continuous_setup(const ModelParams& params, const HistoryData& hist, const KernelDensity& phi,
                       const KernelDensity& psi, double t_end, double step, const char* who) {
  params.validate();
  require_exponential(phi, who);
  require_exponential(psi, who);
  detail::check_step(t_end, step, std::min(phi.support_lo(), psi.support_lo()), who);
  Setup s;
  s.x0 = initial_conditions(params, hist, mean_delay(psi), mean_delay(phi));
  s.resolved = hist;
  s.resolved.c_s = hist.susceptible(s.x0.s);
  return s;
}

}  // namespace

Trajectory solve_reference(const ModelParams& params, const HistoryData& hist, const KernelDensity& phi,
                           const KernelDensity& psi, double t_end, double step) {
  const Setup setup = continuous_setup(params, hist, phi, psi, t_end, step, "solve_reference");
  ConvolutionQuadrature g(make_g_term(phi, setup.resolved));
  ConvolutionQuadrature h(make_h_term(psi, params.beta0(), setup.resolved), params.beta);

  auto rhs = [&](double t, const std::array<double, kNumCompartments>& y, const Trajectory& past) {
    const double returning = g(past, t);
    const double maturing = h(past, t);
    return rhs_aggregated(t, CompartmentState::from_array(y), returning, maturing, params).to_array();
  };
  return detail::integrate_rk4<kNumCompartments>(setup.x0.to_array(), setup.resolved, {}, t_end, step, rhs,
                                                 "solve_reference");
}

Trajectory solve_chain_oracle(const ModelParams& params, const HistoryData& hist, const KernelDensity& phi,
                              const KernelDensity& psi, double t_end, double step) {
  const Setup setup = continuous_setup(params, hist, phi, psi, t_end, step, "solve_chain_oracle");
  const double sigma = phi.support_lo();
  const double theta = psi.support_lo();
  const double rate_phi = phi.rate();
  const double rate_psi = psi.rate();
  const double c_i = setup.resolved.c_i;
  const double history_incidence = params.beta0() * c_i * *setup.resolved.c_s;

  constexpr std::size_t W = kNumCompartments + 2;
  constexpr std::size_t kG = kNumCompartments;
  constexpr std::size_t kH = kNumCompartments + 1;
  std::array<double, W> y0{};
  const auto x0 = setup.x0.to_array();
  std::copy(x0.begin(), x0.end(), y0.begin());
  y0[kG] = c_i;
  y0[kH] = history_incidence;

  auto rhs = [&](double t, const std::array<double, W>& y, const Trajectory& past) {
    const double i_lag = past.eval(t - sigma, Compartment::I);
    const double s_lag_time = t - theta;
    double inc_lag = history_incidence;
    if (s_lag_time >= 0.0) {
      const auto at = past.sample(s_lag_time);
      inc_lag = params.beta(s_lag_time) * past.at(at, index(Compartment::I)) * past.at(at, index(Compartment::S));
    }
    const CompartmentState x{y[0], y[1], y[2], y[3], y[4], y[5]};
    const auto dx = rhs_aggregated(t, x, y[kG], y[kH], params).to_array();
    std::array<double, W> dy{};
    std::copy(dx.begin(), dx.end(), dy.begin());
    dy[kG] = rate_phi * (i_lag - y[kG]);
    dy[kH] = rate_psi * (inc_lag - y[kH]);
    return dy;
  };
  return detail::integrate_rk4<W>(y0, setup.resolved, {"G", "H"}, t_end, step, rhs, "solve_chain_oracle");
}

}  // namespace edelay
