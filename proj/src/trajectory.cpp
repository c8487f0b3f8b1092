#include "endemic_delay/trajectory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace edelay {

Trajectory::Trajectory(HistoryData prehistory, std::vector<std::string> aux_names)
    : prehistory_(prehistory), aux_names_(std::move(aux_names)), width_(kNumCompartments + aux_names_.size()) {
  if (!prehistory_.c_s) throw std::invalid_argument("Trajectory: pre-history c_S must be resolved");
}

void Trajectory::append(double t, std::span<const double> values, std::span<const double> derivs) {
  if (values.size() != width_ || derivs.size() != width_) {
    throw std::invalid_argument("Trajectory::append: expected " + std::to_string(width_) + " components");
  }
  if (times_.empty()) {
    if (t != 0.0) throw std::invalid_argument("Trajectory::append: first knot must be at t = 0");
  } else if (!(t > times_.back())) {
    throw std::invalid_argument("Trajectory::append: knots must be strictly increasing");
  }
  times_.push_back(t);
  values_.insert(values_.end(), values.begin(), values.end());
  derivs_.insert(derivs_.end(), derivs.begin(), derivs.end());
  if (times_.size() == 2) inv_step_hint_ = 1.0 / (times_[1] - times_[0]);
}

void Trajectory::append(double t, const CompartmentState& x, const CompartmentState& dx) {
  if (width_ != kNumCompartments) throw std::invalid_argument("Trajectory::append: auxiliary components missing");
  const auto v = x.to_array();
  const auto d = dx.to_array();
  append(t, std::span<const double>(v), std::span<const double>(d));
}

double Trajectory::t_end() const {
  if (times_.empty()) throw std::logic_error("Trajectory: no knots");
  return times_.back();
}

CompartmentState Trajectory::state(std::size_t knot) const {
  return CompartmentState::from_array(std::span<const double, kNumCompartments>(&values_[knot * width_], kNumCompartments));
}

CompartmentState Trajectory::deriv(std::size_t knot) const {
  return CompartmentState::from_array(std::span<const double, kNumCompartments>(&derivs_[knot * width_], kNumCompartments));
}

void Trajectory::throw_beyond_end(double t) const {
  if (times_.empty()) throw std::out_of_range("Trajectory: evaluation before any knot is stored");
  throw std::out_of_range("Trajectory: t = " + std::to_string(t) + " beyond last stored time " +
                          std::to_string(times_.back()));
}

CompartmentState Trajectory::eval(double t) const {
  const Sample s = sample(t);
  CompartmentState x;
  for (Compartment c : kAllCompartments) x[c] = at(s, index(c));
  return x;
}

}  // namespace edelay
