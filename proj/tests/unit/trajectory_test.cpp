#include <doctest.h>

#include <stdexcept>

#include "support.hpp"

using namespace edelay;

namespace {

Trajectory cubic_trajectory(double h, std::size_t knots) {
  // I(t) = t^3 - 2t + 5 with exact derivatives; Hermite reproduces cubics.
  Trajectory traj({5.0, 100.0});
  for (std::size_t k = 0; k < knots; ++k) {
    const double t = static_cast<double>(k) * h;
    const CompartmentState x{100.0 - t, 0, t * t * t - 2 * t + 5, 0, 0, 0};
    const CompartmentState dx{-1.0, 0, 3 * t * t - 2, 0, 0, 0};
    traj.append(t, x, dx);
  }
  return traj;
}

}  // namespace

TEST_CASE("pre-history returns the constant history values") {
  const auto traj = cubic_trajectory(0.5, 5);
  CHECK(traj.eval(-5.0, Compartment::I) == 5.0);
  CHECK(eval_history(traj, -5.0, Compartment::S) == 100.0);
  CHECK(traj.eval(-1e-9, Compartment::L) == traj.value(0, index(Compartment::L)));
}

TEST_CASE("knots are reproduced exactly and cubics are interpolated exactly") {
  const auto traj = cubic_trajectory(0.5, 9);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    CHECK(traj.eval(traj.times()[k], Compartment::I) == traj.value(k, index(Compartment::I)));
  }
  for (double t : {0.1, 0.77, 1.25, 2.49, 3.9, 4.0}) {
    CHECK(traj.eval(t, Compartment::I) == doctest::Approx(t * t * t - 2 * t + 5).epsilon(1e-13));
    CHECK(traj.eval(t, Compartment::S) == doctest::Approx(100.0 - t).epsilon(1e-14));
  }
}

TEST_CASE("constant solutions interpolate to the same constant") {
  Trajectory traj({3.0, 7.0});
  for (int k = 0; k < 4; ++k) traj.append(k * 0.25, CompartmentState{7, 1, 3, 2, 2, 0}, CompartmentState{});
  CHECK(traj.eval(0.125, Compartment::I) == 3.0);
  CHECK(traj.eval(0.6, Compartment::L) == 1.0);
  CHECK(traj.eval(0.6) == CompartmentState{7, 1, 3, 2, 2, 0});
}

TEST_CASE("extrapolation and malformed knots are refused") {
  auto traj = cubic_trajectory(0.5, 3);
  CHECK_THROWS_AS(traj.eval(1.5, Compartment::I), std::out_of_range);
  CHECK_NOTHROW(traj.eval(1.0 + 1e-14, Compartment::I));
  CHECK_THROWS_AS(traj.append(1.0, CompartmentState{}, CompartmentState{}), std::invalid_argument);
  Trajectory fresh({1.0, 1.0});
  CHECK_THROWS_AS(fresh.append(0.5, CompartmentState{}, CompartmentState{}), std::invalid_argument);
  CHECK_THROWS_AS(fresh.eval(0.0, Compartment::I), std::out_of_range);
  CHECK_THROWS_AS(Trajectory(HistoryData{1.0, {}}), std::invalid_argument);
  Trajectory aux({1.0, 1.0}, {"G"});
  CHECK(aux.width() == 7);
  CHECK_THROWS_AS(aux.append(0.0, CompartmentState{}, CompartmentState{}), std::invalid_argument);
}

TEST_CASE("non-uniform knots are located correctly") {
  Trajectory traj({0.0, 1.0});
  const std::vector<double> ts{0.0, 0.1, 0.15, 0.9, 1.0, 2.5};
  for (double t : ts) traj.append(t, CompartmentState{0, 0, 2 * t, 0, 0, 0}, CompartmentState{0, 0, 2, 0, 0, 0});
  for (double t : {0.05, 0.12, 0.5, 0.95, 1.7, 2.5}) CHECK(traj.eval(t, Compartment::I) == doctest::Approx(2 * t));
}
