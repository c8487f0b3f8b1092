#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "support.hpp"

using namespace edelay;

namespace {

Trajectory linear(double offset_l, double t_end) {
  Trajectory traj({1.0, 5.0});
  for (double t = 0.0; t <= t_end + 1e-9; t += 0.5) {
    traj.append(t, CompartmentState{5.0, offset_l + t, 1.0 + t, 0, 0, 0}, CompartmentState{0, 1, 1, 0, 0, 0});
  }
  return traj;
}

}  // namespace

TEST_CASE("sup-norm error of identical and shifted trajectories") {
  const auto a = linear(0.0, 10.0);
  const auto b = linear(2.5, 10.0);
  const auto same = sup_norm_error(a, a, 0.0, 10.0);
  for (double e : same) CHECK(e == 0.0);
  const auto shifted = sup_norm_error(a, b, 0.0, 10.0);
  CHECK(shifted[index(Compartment::L)] == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(shifted[index(Compartment::S)] == 0.0);
  CHECK(shifted[index(Compartment::I)] == 0.0);
  CHECK_THROWS_AS(sup_norm_error(a, linear(0.0, 5.0), 0.0, 10.0), std::out_of_range);
  CHECK_THROWS_AS(sup_norm_error(a, b, 0.0, 10.0, 0.0), std::invalid_argument);
}

TEST_CASE("peak values read the sampled maximum") {
  const auto a = linear(0.0, 10.0);
  const auto peak = peak_values(a, 0.0, 10.0);
  CHECK(peak[index(Compartment::I)] == doctest::Approx(11.0));
  CHECK(peak[index(Compartment::S)] == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("observed order of exact power laws") {
  const std::vector<double> n{2, 4, 8, 16};
  std::vector<double> e;
  for (double x : n) e.push_back(3.0 / (x * x));
  CHECK(observed_order(n, e) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(observed_order(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
  CHECK_THROWS_AS(observed_order(n, std::vector<double>{1, 0, 1, 1}), std::invalid_argument);
}

TEST_CASE("sweep entries are sorted, deterministic and record failures") {
  ExperimentSetup s;
  s.t_end = 60.0;
  s.step = 0.05;
  s.threads = 3;
  const std::vector<LagPair> safe{{10, 20}, {1, 2}, {4, 8}, {0, 3}};
  const auto report = convergence_sweep(s, safe);
  REQUIRE(report.entries.size() == 4);
  CHECK(report.entries[0].pair == LagPair{0, 3});
  CHECK_FALSE(report.entries[0].ok());
  CHECK(std::isnan(report.entries[0].sup_err[0]));
  CHECK(report.entries[1].pair == LagPair{1, 2});
  CHECK(report.entries[3].pair == LagPair{10, 20});
  for (std::size_t k = 1; k < 4; ++k) CHECK(report.entries[k].ok());
  CHECK(report.reference.kind == ReferenceKind::ChainOracle);
  CHECK(report.reference.step == 0.05);

  // Same pair again, sequentially: identical numbers.
  s.threads = 1;
  const std::vector<LagPair> again{{4, 8}};
  const auto second = convergence_sweep(s, again);
  CHECK(second.entries[0].sup_err == report.entries[2].sup_err);
  CHECK(second.entries[0].rel_sup_err == report.entries[2].rel_sup_err);
}

TEST_CASE("sweep keeps trajectories on request and reuses a supplied reference") {
  ExperimentSetup s;
  s.t_end = 30.0;
  s.step = 0.05;
  auto ref = std::make_shared<const Trajectory>(solve_reference_kind(s, ReferenceKind::ChainOracle));
  const std::vector<LagPair> pairs{{2, 4}};
  const auto report = convergence_sweep(s, pairs, ref, ReferenceMeta{ReferenceKind::ChainOracle, 0.05, 30.0, 0.0},
                                        SweepOptions{true});
  CHECK(report.reference_trajectory == ref);
  REQUIRE(report.entries[0].trajectory);
  CHECK(report.entries[0].trajectory->t_end() == 30.0);
}

TEST_CASE("benchmark rows cover each solver and horizon") {
  ExperimentSetup s;
  s.step = 0.1;
  BenchmarkOptions o;
  o.horizons = {10.0, 20.0};
  o.pair = {4, 8};
  o.repeats = 1;
  o.warmup = 0;
  const auto rows = benchmark(s, o);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].solver == "discrete");
  CHECK(rows[1].solver == "chain-oracle");
  CHECK(rows[2].solver == "quadrature");
  CHECK(rows[3].t_end == 20.0);
  for (const auto& r : rows) CHECK(r.best_seconds >= 0.0);
  o.repeats = 0;
  CHECK_THROWS_AS(benchmark(s, o), std::invalid_argument);
}

TEST_CASE("reference kinds parse") {
  CHECK(parse_reference_kind("chain") == ReferenceKind::ChainOracle);
  CHECK(parse_reference_kind(to_string(ReferenceKind::Quadrature)) == ReferenceKind::Quadrature);
  CHECK_THROWS_AS(parse_reference_kind("exact"), std::invalid_argument);
}
