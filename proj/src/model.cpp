#include "endemic_delay/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace edelay {

std::string_view to_string(Compartment c) { return kCompartmentNames[index(c)]; }

Compartment parse_compartment(std::string_view name) {
  for (std::size_t k = 0; k < kNumCompartments; ++k) {
    if (kCompartmentNames[k] == name) return kAllCompartments[k];
  }
  throw std::invalid_argument("unknown compartment '" + std::string(name) + "'");
}

double& CompartmentState::operator[](Compartment c) {
  switch (c) {
    case Compartment::S: return s;
    case Compartment::L: return l;
    case Compartment::I: return i;
    case Compartment::RT: return r_t;
    case Compartment::RP: return r_p;
    case Compartment::D: return d;
  }
  throw std::out_of_range("compartment");
}

double CompartmentState::operator[](Compartment c) const {
  return const_cast<CompartmentState&>(*this)[c];
}

ContactRate constant_rate(double beta0) {
  return [beta0](double) { return beta0; };
}

double derive_mu(double gamma, double i_fr) {
  if (!(i_fr >= 0.0 && i_fr < 1.0)) throw std::invalid_argument("derive_mu: infection fatality risk must lie in [0, 1)");
  if (!(gamma >= 0.0)) throw std::invalid_argument("derive_mu: recovery rate must be >= 0");
  return gamma * i_fr / (1.0 - i_fr);
}

void ModelParams::validate() const {
  if (!beta) throw std::invalid_argument("model: contact rate is not set");
  const double b0 = beta(0.0);
  if (!(std::isfinite(b0) && b0 >= 0.0)) throw std::invalid_argument("model.beta0: must be finite and >= 0");
  if (!(std::isfinite(gamma) && gamma >= 0.0)) throw std::invalid_argument("model.gamma: must be finite and >= 0");
  if (!(std::isfinite(mu) && mu >= 0.0)) throw std::invalid_argument("model.mu: must be finite and >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("model.p: must lie in [0, 1]");
  if (!(i_fr >= 0.0 && i_fr < 1.0)) throw std::invalid_argument("model.I_FR: must lie in [0, 1)");
  if (!(std::isfinite(n0) && n0 > 0.0)) throw std::invalid_argument("model.N0: must be finite and > 0");
}

ModelParams ModelParams::with_derived_mu(ContactRate beta, double gamma, double i_fr, double p, double n0) {
  ModelParams m;
  m.beta = std::move(beta);
  m.gamma = gamma;
  m.i_fr = i_fr;
  m.mu = derive_mu(gamma, i_fr);
  m.p = p;
  m.n0 = n0;
  return m;
}

ModelParams ModelParams::baseline() {
  constexpr double n = 1e7;
  return with_derived_mu(constant_rate(0.5 / n), 0.1, 0.425, 0.9, n);
}

CompartmentState initial_conditions(const ModelParams& params, const HistoryData& hist, double psi_mean,
                                    double phi_mean) {
  if (!(psi_mean > 0.0 && phi_mean > 0.0)) throw std::invalid_argument("initial_conditions: kernel means must be > 0");
  if (!(std::isfinite(hist.c_i) && hist.c_i >= 0.0)) throw std::invalid_argument("history.c_I: must be finite and >= 0");
  if (hist.c_s && !(*hist.c_s > 0.0)) throw std::invalid_argument("history.c_S: must be > 0");

  const double b0 = params.beta0();
  const double ci = hist.c_i;
  CompartmentState x;
  x.i = ci;
  x.r_t = ci * params.p * params.gamma * phi_mean;
  x.r_p = (1.0 - params.p) * params.gamma * ci * psi_mean;
  const double denom = 1.0 + b0 * ci * psi_mean;
  if (!(denom > 0.0)) throw std::invalid_argument("initial_conditions: non-positive denominator for S(0)");
  x.s = (params.n0 - ci - x.r_t - x.r_p) / denom;
  x.l = b0 * ci * x.s * psi_mean;
  x.d = 0.0;
  for (Compartment c : kAllCompartments) {
    if (!(x[c] >= 0.0)) {
      throw std::invalid_argument("initial_conditions: compartment " + std::string(to_string(c)) +
                                  " would be negative");
    }
  }
  return x;
}

CompartmentState rhs_aggregated(double t, const CompartmentState& x, double returning, double maturing,
                                const ModelParams& params) {
  const double infection = params.beta(t) * x.i * x.s;
  const double recovery = params.gamma * x.i;
  CompartmentState dx;
  dx.s = -infection + params.p * params.gamma * returning;
  dx.l = infection - maturing;
  dx.i = maturing - recovery - params.mu * x.i;
  dx.r_t = params.p * recovery - params.p * params.gamma * returning;
  dx.r_p = (1.0 - params.p) * recovery;
  dx.d = params.mu * x.i;
  return dx;
}

CompartmentState rhs_discrete(double t, const CompartmentState& current, std::span<const double> lagged_i,
                              std::span<const double> omega, std::span<const double> lagged_incidence,
                              std::span<const double> varpi, const ModelParams& params) {
  if (lagged_i.size() != omega.size() || lagged_incidence.size() != varpi.size()) {
    throw std::invalid_argument("rhs_discrete: lagged samples and weights differ in length");
  }
  double returning = 0.0;
  for (std::size_t k = 0; k < omega.size(); ++k) returning += omega[k] * lagged_i[k];
  double maturing = 0.0;
  for (std::size_t k = 0; k < varpi.size(); ++k) maturing += varpi[k] * lagged_incidence[k];
  return rhs_aggregated(t, current, returning, maturing, params);
}

}  // namespace edelay
