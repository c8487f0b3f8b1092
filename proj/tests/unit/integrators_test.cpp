#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "support.hpp"

using namespace edelay;
using testing::Gen;

namespace {

double max_drift(const Trajectory& traj) {
  const double n0 = traj.state(0).total();
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) worst = std::max(worst, std::abs(traj.state(k).total() - n0) / n0);
  return worst;
}

}  // namespace

TEST_CASE("step count covers the horizon") {
  CHECK(detail::step_count(365.0, 0.01) == 36500);
  CHECK(detail::step_count(1.0, 0.3) == 4);
  CHECK(detail::step_count(0.3, 0.1) == 3);
}

TEST_CASE("disease-free history gives a constant trajectory") {
  const auto p = ModelParams::baseline();
  const auto rho = discretize(testing::baseline_phi(), 86.0, 20);
  const auto tau = discretize(testing::baseline_psi(), 86.0, 10);
  const auto traj = solve_discrete(p, {0.0, {}}, rho, tau, 50.0, 0.05);
  const auto x0 = traj.state(0);
  CHECK(x0.s == p.n0);
  for (std::size_t k = 0; k < traj.size(); k += 97) CHECK(traj.state(k) == x0);
  CHECK(traj.state(traj.size() - 1) == x0);
}

TEST_CASE("discrete initial state uses the comb moments") {
  const auto p = ModelParams::baseline();
  const auto rho = discretize(testing::baseline_phi(), 86.0, 4);
  const auto tau = discretize(testing::baseline_psi(), 86.0, 3);
  const auto traj = solve_discrete(p, {10.0, {}}, rho, tau, 1.0, 0.1);
  const auto expected = initial_conditions(p, {10.0, {}}, tau.first_moment(), rho.first_moment());
  CHECK(traj.state(0) == expected);
  CHECK(*traj.prehistory().c_s == expected.s);
}

TEST_CASE("baseline discrete run conserves the population and has one wave") {
  ExperimentSetup s;
  s.step = 0.05;
  const auto traj = solve_discrete_pair(s, {20, 40});
  CHECK(max_drift(traj) < 1e-9);
  // Single wave: I rises to one maximum then falls.
  std::size_t peak = 0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.value(k, 2) > traj.value(peak, 2)) peak = k;
  }
  int direction_changes = 0;
  for (std::size_t k = 200; k + 200 < traj.size(); k += 200) {
    const bool up_before = traj.value(k, 2) > traj.value(k - 200, 2);
    const bool up_after = traj.value(k + 200, 2) > traj.value(k, 2);
    direction_changes += up_before != up_after;
  }
  CHECK(direction_changes == 1);
  CHECK(traj.times()[peak] > 100.0);
  CHECK(traj.times()[peak] < 250.0);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    for (std::size_t c = 0; c < kNumCompartments; ++c) CHECK(traj.value(k, c) >= -1e-6 * 1e7);
  }
}

TEST_CASE("solver preconditions") {
  const auto p = ModelParams::baseline();
  const auto rho = discretize(testing::baseline_phi(), 86.0, 20);
  const auto tau = discretize(testing::baseline_psi(), 86.0, 10);
  CHECK_THROWS_AS(solve_discrete(p, {10.0, {}}, rho, tau, 10.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_discrete(p, {10.0, {}}, rho, tau, -1.0, 0.1), std::invalid_argument);
  // Smallest node is 5 + 8.1 / 2 = 9.05, so step 3 breaks the quarter-lag rule.
  CHECK_THROWS_AS(solve_discrete(p, {10.0, {}}, rho, tau, 10.0, 3.0), std::invalid_argument);
  CHECK_NOTHROW(solve_discrete(p, {10.0, {}}, rho, tau, 10.0, 2.0));
  CHECK_THROWS_AS(solve_discrete(p, {10.0, {}}, DiracComb{}, tau, 10.0, 0.1), std::invalid_argument);
}

TEST_CASE("a final partial step lands exactly on t_end") {
  ExperimentSetup s;
  // Before the smallest lag (9.05) activates the solution is smooth, so a
  // coarse grid with a short last step must match a fine grid to RK4 accuracy.
  s.t_end = 9.03;
  s.step = 0.1;
  const auto traj = solve_discrete_pair(s, {10, 20});
  CHECK(traj.t_end() == 9.03);
  CHECK(traj.size() == 92);
  s.step = 0.01;
  const auto fine = solve_discrete_pair(s, {10, 20});
  CHECK(traj.eval(9.03, Compartment::I) == doctest::Approx(fine.eval(9.03, Compartment::I)).epsilon(1e-9));
}

TEST_CASE("non-finite values abort the solve") {
  auto p = ModelParams::baseline();
  p.beta = [](double t) { return t > 1.0 ? std::nan("") : 5e-8; };
  const auto rho = discretize(testing::baseline_phi(), 86.0, 4);
  const auto tau = discretize(testing::baseline_psi(), 86.0, 4);
  CHECK_THROWS_AS(solve_discrete(p, {10.0, {}}, rho, tau, 5.0, 0.1), SolverError);
}

TEST_CASE("time-varying contact rates are honoured") {
  ExperimentSetup s;
  s.t_end = 120.0;
  s.step = 0.05;
  const auto constant = solve_discrete_pair(s, {10, 20});
  s.params.beta = [](double t) { return 5e-8 * (t < 30.0 ? 1.0 : 0.5); };
  const auto reduced = solve_discrete_pair(s, {10, 20});
  CHECK(reduced.eval(29.0, Compartment::I) == doctest::Approx(constant.eval(29.0, Compartment::I)).epsilon(1e-12));
  CHECK(reduced.eval(120.0, Compartment::I) < 0.5 * constant.eval(120.0, Compartment::I));
  CHECK(max_drift(reduced) < 1e-9);
}

TEST_CASE("property: random parameter sets conserve the population") {
  Gen gen(5150);
  for (int trial = 0; trial < 12; ++trial) {
    const double n0 = gen.log_uniform(1e4, 1e8);
    const auto p = ModelParams::with_derived_mu(constant_rate(gen.uniform(0.1, 1.5) / n0), gen.uniform(0.05, 0.5),
                                                gen.uniform(0, 0.6), gen.uniform(0, 1), n0);
    const auto phi = KernelDensity::shifted_exponential(gen.uniform(2, 15), gen.uniform(0.05, 0.5));
    const auto psi = KernelDensity::shifted_exponential(gen.uniform(1, 8), gen.uniform(0.05, 0.5));
    const auto rho = discretize(phi, phi.support_lo() + 60, gen.count(1, 30), static_cast<NodeRule>(trial % 3));
    const auto tau = discretize(psi, psi.support_lo() + 60, gen.count(1, 30), static_cast<NodeRule>(trial % 3));
    const auto traj = solve_discrete(p, {gen.uniform(1, 100), {}}, rho, tau, 150.0, 0.1);
    CHECK(max_drift(traj) < 1e-9);
  }
}
