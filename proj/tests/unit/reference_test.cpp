#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "support.hpp"

using namespace edelay;

namespace {

// Hand-built trajectory with I(t) = value_i, S(t) = value_s on [0, t_end].
Trajectory flat(double ci, double cs, double value_i, double value_s, double t_end, double h) {
  Trajectory traj({ci, cs});
  for (double t = 0.0; t <= t_end + 1e-12; t += h) {
    traj.append(std::min(t, t_end), CompartmentState{value_s, 0, value_i, 0, 0, 0}, CompartmentState{});
    if (t >= t_end) break;
  }
  return traj;
}

}  // namespace

TEST_CASE("G equals the pre-history value up to activation") {
  const auto phi = testing::baseline_phi();
  const auto traj = flat(10.0, 1e7, 10.0, 1e7, 30.0, 0.1);
  CHECK(eval_G(traj, 3.0, phi) == 10.0);
  CHECK(eval_G(traj, 10.0, phi) == 10.0);
  CHECK(eval_G(traj, 10.0 + 1e-13, phi) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("G of a constant equals that constant") {
  const auto phi = testing::baseline_phi();
  const auto traj = flat(10.0, 1e7, 10.0, 1e7, 60.0, 0.1);
  // Simpson against the exponential weight: error of order (rate h)^4.
  for (double t : {12.0, 20.0, 33.33, 70.0}) CHECK(eval_G(traj, t, phi) == doctest::Approx(10.0).epsilon(1e-10));
}

TEST_CASE("raising I by one on the integrated window raises G by the kernel mass there") {
  // At t = sigma + 1/lambda the window [0, t - sigma] carries mass 1 - exp(-lambda (t - sigma)).
  const auto phi = testing::baseline_phi();
  const double t = 10.0 + 1.0 / 0.1;
  const auto traj = flat(10.0, 1e7, 11.0, 1e7, 20.0, 0.05);
  CHECK(eval_G(traj, t, phi) == doctest::Approx(10.0 + (1.0 - std::exp(-1.0))).epsilon(1e-10));
}

TEST_CASE("G of a polynomial history against the closed form") {
  // I(s) = s^2 on [0, u], u = t - sigma; G = c_I e^{-lambda u} + integral of s^2 lambda e^{-lambda (u - s)}.
  const auto phi = testing::baseline_phi();
  const double lam = 0.1, h = 0.02, t_end = 40.0;
  Trajectory traj({0.0, 1.0});
  for (std::size_t k = 0; k * h <= t_end + 1e-9; ++k) {
    const double s = static_cast<double>(k) * h;
    traj.append(s, CompartmentState{1, 0, s * s, 0, 0, 0}, CompartmentState{0, 0, 2 * s, 0, 0, 0});
  }
  for (double t : {25.0, 37.31, 50.0}) {
    const double u = t - 10.0;
    const double exact = u * u - 2 * u / lam + 2 / (lam * lam) * (1 - std::exp(-lam * u));
    CHECK(eval_G(traj, t, phi) == doctest::Approx(exact).epsilon(1e-11));
  }
}

TEST_CASE("H at activation and for constant states") {
  const auto psi = testing::baseline_psi();
  const auto beta = constant_rate(5e-8);
  const auto traj = flat(10.0, 9e6, 10.0, 9e6, 40.0, 0.1);
  CHECK(eval_H(traj, 5.0, psi, beta) == 5e-8 * 10.0 * 9e6);
  CHECK(eval_H(traj, 30.0, psi, beta) == doctest::Approx(5e-8 * 10.0 * 9e6).epsilon(1e-10));
}

TEST_CASE("convolution quadrature requires the exponential family and a long enough trajectory") {
  const auto traj = flat(10.0, 1e7, 10.0, 1e7, 5.0, 0.1);
  CHECK_THROWS_AS(eval_G(traj, 16.0, testing::baseline_phi()), std::out_of_range);
  CHECK_THROWS_AS(eval_G(traj, 12.0, KernelDensity::uniform(10, 20)), std::invalid_argument);
}

TEST_CASE("chain oracle: G rests at c_I while I is frozen") {
  auto p = ModelParams::baseline();
  p.beta = constant_rate(0.0);
  p.gamma = 0.0;
  p.mu = 0.0;
  const auto traj = solve_chain_oracle(p, {10.0, {}}, testing::baseline_phi(), testing::baseline_psi(), 40.0, 0.05);
  for (double t : {1.0, 9.99, 25.0, 40.0}) {
    CHECK(traj.eval(t, Compartment::I) == 10.0);
    CHECK(traj.eval_aux(t, 0) == doctest::Approx(10.0).epsilon(1e-13));
  }
}

TEST_CASE("chain equation: impulse response before the lag activates") {
  // G' = lambda (I(t - sigma) - G) with a zero infected pre-history and G(0) = 10
  // has the solution G = 10 exp(-lambda t) on [0, sigma].
  const double lam = 0.1, sigma = 10.0, g0 = 10.0;
  const std::array<double, 7> y0{1, 0, 0, 0, 0, 0, g0};
  auto rhs = [&](double t, const std::array<double, 7>& y, const Trajectory& past) {
    std::array<double, 7> dy{};
    dy[6] = lam * (past.eval(t - sigma, Compartment::I) - y[6]);
    return dy;
  };
  const auto traj = detail::integrate_rk4<7>(y0, {0.0, 1.0}, {"G"}, sigma, 0.01, rhs, "impulse");
  for (double t : {0.5, 3.0, 9.7, 10.0}) {
    CHECK(traj.eval_aux(t, 0) == doctest::Approx(g0 * std::exp(-lam * t)).epsilon(1e-11));
  }
}

TEST_CASE("reference and chain oracle agree on a short baseline run") {
  ExperimentSetup s;
  s.t_end = 60.0;
  s.step = 0.02;
  const auto ref = solve_reference_kind(s, ReferenceKind::Quadrature);
  const auto chain = solve_reference_kind(s, ReferenceKind::ChainOracle);
  REQUIRE(chain.aux_names() == std::vector<std::string>{"G", "H"});
  const auto diff = sup_norm_error(ref, chain, 0.0, 60.0);
  const auto peak = peak_values(chain, 0.0, 60.0);
  for (std::size_t c = 0; c < kNumCompartments; ++c) CHECK(diff[c] <= 1e-8 * peak[c]);

  // Quadrature H on the chain's own trajectory reproduces its H component.
  const double h30 = eval_H(chain, 30.0, testing::baseline_psi(), s.params.beta);
  CHECK(h30 == doctest::Approx(chain.eval_aux(30.0, 1)).epsilon(1e-3));
  const double g30 = eval_G(chain, 30.0, testing::baseline_phi());
  CHECK(g30 == doctest::Approx(chain.eval_aux(30.0, 0)).epsilon(1e-3));
}

TEST_CASE("disease-free continuous runs stay constant") {
  ExperimentSetup s;
  s.history.c_i = 0.0;
  s.t_end = 20.0;
  s.step = 0.1;
  for (auto kind : {ReferenceKind::Quadrature, ReferenceKind::ChainOracle}) {
    const auto traj = solve_reference_kind(s, kind);
    for (std::size_t k = 0; k < traj.size(); ++k) CHECK(traj.state(k) == traj.state(0));
  }
}

TEST_CASE("continuous solvers reject non-exponential kernels") {
  const auto p = ModelParams::baseline();
  const auto u = KernelDensity::uniform(5, 20);
  CHECK_THROWS_AS(solve_reference(p, {10.0, {}}, u, testing::baseline_psi(), 10.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(solve_chain_oracle(p, {10.0, {}}, testing::baseline_phi(), u, 10.0, 0.1), std::invalid_argument);
}
