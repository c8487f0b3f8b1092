#pragma once

#include <cstddef>
#include <vector>

#include "endemic_delay/integrators.hpp"
#include "endemic_delay/kernels.hpp"
#include "endemic_delay/model.hpp"
#include "endemic_delay/trajectory.hpp"

namespace edelay {

enum class ConvolutionKind { G, H };

/// One delayed aggregate of the continuous model with a shifted-exponential
/// kernel:
///   G(t) = integral of I(t - rho) Phi(rho) over rho >= sigma
///   H(t) = integral of (beta I S)(t - tau) Psi(tau) over tau >= theta
/// Before activation_time (the kernel shift) only pre-history is read and the
/// term equals prehistory_value.
struct ConvolutionTerm {
  ConvolutionKind kind;
  KernelDensity kernel;
  double prehistory_value;
  double activation_time;
};

ConvolutionTerm make_g_term(const KernelDensity& phi, const HistoryData& resolved);
ConvolutionTerm make_h_term(const KernelDensity& psi, double beta0, const HistoryData& resolved);

/// Evaluates a ConvolutionTerm against a (possibly growing) trajectory:
/// composite Simpson over the stored knots for the part of the history with
/// t >= 0, Hermite values at cell midpoints, plus the closed-form pre-history
/// tail prehistory_value * exp(-rate (t - shift)).
///
/// Integrand samples are cached and extended as the trajectory grows, so one
/// instance must only ever be used with one trajectory.
class ConvolutionQuadrature {
 public:
  ConvolutionQuadrature(ConvolutionTerm term, ContactRate beta = {});

  double operator()(const Trajectory& traj, double t);

  const ConvolutionTerm& term() const noexcept { return term_; }

 private:
  double integrand(const Trajectory& traj, const Trajectory::Sample& s, double time) const;
  void extend(const Trajectory& traj, std::size_t knots);
  double knot_sum(std::size_t last_knot, double base);

  ConvolutionTerm term_;
  ContactRate beta_;
  // knot_[k] at t_k; mid_[k] at the midpoint of [t_k, t_{k+1}];
  // half_decay_[k] = exp(-rate (t_{k+1} - t_k) / 2).
  std::vector<double> knot_;
  std::vector<double> mid_;
  std::vector<double> width_;
  std::vector<double> half_decay_;
  std::size_t uniform_cells_ = 0;  // cells [0, uniform_cells_) share the first cell's width
  std::vector<double> weights_;    // uniform fast path: m-th half-cell decay times Simpson coefficient
};

/// G(t) on a stored trajectory. Needs the trajectory to reach t - sigma.
double eval_G(const Trajectory& traj, double t, const KernelDensity& phi);
/// H(t) on a stored trajectory; beta is the contact rate.
double eval_H(const Trajectory& traj, double t, const KernelDensity& psi, const ContactRate& beta);

/// Continuous-kernel model as an ODE in (S, L, I, RT, RP, D) whose right-hand
/// side evaluates G and H by quadrature over the solution computed so far.
/// Cost grows quadratically in t_end/step. Shifted-exponential kernels only.
Trajectory solve_reference(const ModelParams& params, const HistoryData& hist, const KernelDensity& phi,
                           const KernelDensity& psi, double t_end, double step = kDefaultStep);

/// Same dynamics with G and H carried as state:
///   G' = rate_phi (I(t - sigma) - G),  H' = rate_psi ((beta I S)(t - theta) - H),
/// a two-lag delay system with G(0) = c_I and H(0) = beta0 c_I c_S.
/// The returned trajectory has auxiliary components "G" and "H".
Trajectory solve_chain_oracle(const ModelParams& params, const HistoryData& hist, const KernelDensity& phi,
                              const KernelDensity& psi, double t_end, double step = kDefaultStep);

}  // namespace edelay
