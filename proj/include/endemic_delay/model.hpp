#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

namespace edelay {

enum class Compartment : std::size_t { S = 0, L, I, RT, RP, D };

inline constexpr std::size_t kNumCompartments = 6;
inline constexpr std::array<Compartment, kNumCompartments> kAllCompartments{
    Compartment::S, Compartment::L, Compartment::I, Compartment::RT, Compartment::RP, Compartment::D};
inline constexpr std::array<std::string_view, kNumCompartments> kCompartmentNames{"S", "L", "I", "RT", "RP", "D"};

constexpr std::size_t index(Compartment c) noexcept { return static_cast<std::size_t>(c); }
std::string_view to_string(Compartment c);
Compartment parse_compartment(std::string_view name);

/// Susceptible, latent, infectious, temporarily recovered, permanently
/// recovered, dead. Also used for time derivatives of the same quantities.
struct CompartmentState {
  double s = 0.0;
  double l = 0.0;
  double i = 0.0;
  double r_t = 0.0;
  double r_p = 0.0;
  double d = 0.0;

  double& operator[](Compartment c);
  double operator[](Compartment c) const;
  double total() const noexcept { return s + l + i + r_t + r_p + d; }

  std::array<double, kNumCompartments> to_array() const noexcept { return {s, l, i, r_t, r_p, d}; }
  static CompartmentState from_array(std::span<const double, kNumCompartments> v) noexcept {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }

  bool operator==(const CompartmentState&) const = default;
};

/// Contact rate as a function of time (per individual per day).
using ContactRate = std::function<double(double)>;

ContactRate constant_rate(double beta0);

/// mu = gamma * i_fr / (1 - i_fr).
double derive_mu(double gamma, double i_fr);

struct ModelParams {
  ContactRate beta;
  double gamma = 0.0;
  double mu = 0.0;
  double p = 0.0;
  double i_fr = 0.0;
  double n0 = 0.0;

  /// Contact rate at t = 0; also the value assumed for all t <= 0.
  double beta0() const { return beta(0.0); }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  /// gamma = 0.1, N = 1e7, beta = 0.5/N, I_FR = 0.425, p = 0.9, mu derived.
  static ModelParams baseline();
  static ModelParams with_derived_mu(ContactRate beta, double gamma, double i_fr, double p, double n0);
};

/// Constant pre-history: S(t) = c_s and I(t) = c_i for t < 0. When c_s is
/// unset it is taken equal to the derived S(0), so S is continuous at 0.
struct HistoryData {
  double c_i = 0.0;
  std::optional<double> c_s;

  double susceptible(double s0) const { return c_s.value_or(s0); }
};

/// Initial compartments from the pre-history and the kernels' first moments
/// (exact means for the continuous model, comb moments for the discrete one).
/// L(0)  = beta0 c_I S(0) psi_mean
/// RT(0) = c_I p gamma phi_mean
/// RP(0) = (1-p) gamma c_I psi_mean
/// S(0)  = (N0 - c_I - RT(0) - RP(0)) / (1 + beta0 c_I psi_mean), D(0) = 0.
CompartmentState initial_conditions(const ModelParams& params, const HistoryData& hist, double psi_mean,
                                    double phi_mean);

/// Right-hand side given the two delayed aggregates:
///   returning = integral of I(t - rho) against the immunity kernel,
///   maturing  = integral of (beta I S)(t - tau) against the latency kernel.
CompartmentState rhs_aggregated(double t, const CompartmentState& current, double returning, double maturing,
                                const ModelParams& params);

/// Right-hand side of the discrete-lag system: the aggregates are finite
/// weighted sums of lagged samples.
CompartmentState rhs_discrete(double t, const CompartmentState& current, std::span<const double> lagged_i,
                              std::span<const double> omega, std::span<const double> lagged_incidence,
                              std::span<const double> varpi, const ModelParams& params);

}  // namespace edelay
