#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "endemic_delay/model.hpp"

namespace edelay {

/// Dense solution on [0, t_end] plus the constant pre-history for t < 0.
///
/// Knots store the six compartments, optionally followed by auxiliary
/// components (for instance the convolution values G and H), together with
/// their time derivatives. Between knots the solution is the cubic Hermite
/// interpolant of values and derivatives, so evaluation is continuous and
/// exact at the knots.
///
/// For t < 0, S and I return c_S and c_I; the other components return their
/// value at t = 0.
class Trajectory {
 public:
  /// prehistory.c_s must be set.
  explicit Trajectory(HistoryData prehistory, std::vector<std::string> aux_names = {});

  /// Position inside the knot table, reusable across components.
  struct Sample {
    std::size_t k = 0;  // left knot
    double h00 = 1.0, h10 = 0.0, h01 = 0.0, h11 = 0.0;
    bool before_start = false;
  };

  /// First knot must be at t = 0; later knots strictly increasing.
  void append(double t, std::span<const double> values, std::span<const double> derivs);
  void append(double t, const CompartmentState& x, const CompartmentState& dx);

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  /// Number of stored components (6 + auxiliaries).
  std::size_t width() const noexcept { return width_; }
  double t_end() const;

  const std::vector<double>& times() const noexcept { return times_; }
  const HistoryData& prehistory() const noexcept { return prehistory_; }
  const std::vector<std::string>& aux_names() const noexcept { return aux_names_; }

  double value(std::size_t knot, std::size_t component) const { return values_[knot * width_ + component]; }
  double derivative(std::size_t knot, std::size_t component) const { return derivs_[knot * width_ + component]; }
  CompartmentState state(std::size_t knot) const;
  CompartmentState deriv(std::size_t knot) const;

  /// Throws std::out_of_range for t beyond the last knot.
  Sample sample(double t) const;
  double at(const Sample& s, std::size_t component) const;

  double eval(double t, Compartment c) const { return at(sample(t), index(c)); }
  CompartmentState eval(double t) const;
  double eval_aux(double t, std::size_t aux_index) const { return at(sample(t), kNumCompartments + aux_index); }

 private:
  HistoryData prehistory_;
  std::vector<std::string> aux_names_;
  std::size_t width_;
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  double inv_step_hint_ = 0.0;

  [[noreturn]] void throw_beyond_end(double t) const;
};

inline Trajectory::Sample Trajectory::sample(double t) const {
  Sample s;
  if (t < 0.0) {
    s.before_start = true;
    return s;
  }
  const std::size_t n = times_.size();
  if (n == 0) throw_beyond_end(t);
  const double last = times_[n - 1];
  if (t > last) {
    // Tolerate rounding in t = k*h style arguments, never genuine extrapolation.
    if (t - last > 1e-12 * std::max(1.0, std::abs(last))) throw_beyond_end(t);
    t = last;
  }
  if (n == 1) return s;

  std::size_t k = inv_step_hint_ > 0.0 ? static_cast<std::size_t>(t * inv_step_hint_) : 0;
  if (k > n - 2) k = n - 2;
  while (k > 0 && times_[k] > t) --k;
  while (k + 2 < n && times_[k + 1] < t) ++k;

  const double h = times_[k + 1] - times_[k];
  const double u = (t - times_[k]) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  s.k = k;
  s.h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  s.h01 = -2.0 * u3 + 3.0 * u2;
  s.h10 = h * (u3 - 2.0 * u2 + u);
  s.h11 = h * (u3 - u2);
  return s;
}

inline double Trajectory::at(const Sample& s, std::size_t component) const {
  if (s.before_start) {
    if (component == index(Compartment::S)) return *prehistory_.c_s;
    if (component == index(Compartment::I)) return prehistory_.c_i;
    if (times_.empty()) throw_beyond_end(0.0);
    return values_[component];
  }
  const std::size_t base = s.k * width_ + component;
  if (s.h01 == 0.0 && s.h11 == 0.0) return values_[base];
  const std::size_t next = base + width_;
  return s.h00 * values_[base] + s.h10 * derivs_[base] + s.h01 * values_[next] + s.h11 * derivs_[next];
}

/// Free-function form of Trajectory::eval for lagged lookups.
inline double eval_history(const Trajectory& traj, double t, Compartment c) { return traj.eval(t, c); }

}  // namespace edelay
