#include "endemic_delay/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace edelay {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Uniform: return "uniform";
    case KernelFamily::ShiftedExponential: return "shifted-exponential";
    case KernelFamily::Tabulated: return "tabulated";
  }
  return "?";
}

std::string_view to_string(NodeRule rule) {
  switch (rule) {
    case NodeRule::Midpoint: return "midpoint";
    case NodeRule::Left: return "left";
    case NodeRule::Right: return "right";
  }
  return "?";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "uniform") return KernelFamily::Uniform;
  if (name == "shifted-exponential" || name == "exponential") return KernelFamily::ShiftedExponential;
  if (name == "tabulated") return KernelFamily::Tabulated;
  throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

NodeRule parse_node_rule(std::string_view name) {
  if (name == "midpoint") return NodeRule::Midpoint;
  if (name == "left") return NodeRule::Left;
  if (name == "right") return NodeRule::Right;
  throw std::invalid_argument("unknown node rule '" + std::string(name) + "'");
}

KernelDensity KernelDensity::uniform(double lo, double hi) {
  require(std::isfinite(lo) && lo > 0.0, "uniform kernel: lower support bound must be > 0");
  require(std::isfinite(hi) && hi > lo, "uniform kernel: upper support bound must exceed the lower one");
  KernelDensity k;
  k.family_ = KernelFamily::Uniform;
  k.lo_ = lo;
  k.hi_ = hi;
  return k;
}

KernelDensity KernelDensity::shifted_exponential(double shift, double rate) {
  require(std::isfinite(shift) && shift > 0.0, "shifted-exponential kernel: shift must be > 0");
  require(std::isfinite(rate) && rate > 0.0, "shifted-exponential kernel: rate must be > 0");
  KernelDensity k;
  k.family_ = KernelFamily::ShiftedExponential;
  k.lo_ = shift;
  k.hi_ = kInf;
  k.rate_ = rate;
  return k;
}

KernelDensity KernelDensity::tabulated(std::vector<double> abscissae, std::vector<double> values) {
  require(abscissae.size() == values.size(), "tabulated kernel: abscissae and values differ in length");
  require(abscissae.size() >= 2, "tabulated kernel: need at least two samples");
  for (std::size_t k = 1; k < abscissae.size(); ++k) {
    require(abscissae[k] > abscissae[k - 1], "tabulated kernel: abscissae must be strictly increasing");
  }
  for (double v : values) require(std::isfinite(v) && v >= 0.0, "tabulated kernel: values must be finite and >= 0");
  require(abscissae.front() > 0.0, "tabulated kernel: support must start at a positive delay");

  KernelDensity k;
  k.family_ = KernelFamily::Tabulated;
  k.lo_ = abscissae.front();
  k.hi_ = abscissae.back();
  k.xs_ = std::move(abscissae);
  k.ys_ = std::move(values);
  const double total = k.tabulated_integral(k.lo_, k.hi_, false);
  require(total > 0.0, "tabulated kernel: zero total mass");
  for (double& v : k.ys_) v /= total;
  return k;
}

bool KernelDensity::bounded() const noexcept { return std::isfinite(hi_); }

double KernelDensity::density(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  switch (family_) {
    case KernelFamily::Uniform: return 1.0 / (hi_ - lo_);
    case KernelFamily::ShiftedExponential: return rate_ * std::exp(-rate_ * (x - lo_));
    case KernelFamily::Tabulated: {
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - xs_.begin()), 1, xs_.size() - 1);
      const double w = (x - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
      return (1.0 - w) * ys_[k - 1] + w * ys_[k];
    }
  }
  return 0.0;
}

// Simpson's rule on every table cell clipped to [a, b]. The density is linear
// per cell, so the rule is exact for the mass and for the first moment.
double KernelDensity::tabulated_integral(double a, double b, bool first_moment) const {
  a = std::max(a, xs_.front());
  b = std::min(b, xs_.back());
  if (!(b > a)) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 1; k < xs_.size(); ++k) {
    const double lo = std::max(a, xs_[k - 1]);
    const double hi = std::min(b, xs_[k]);
    if (!(hi > lo)) continue;
    // Interpolate inside the cell explicitly so clipped endpoints use cell k.
    const double x0 = xs_[k - 1], x1 = xs_[k];
    auto lin = [&](double x) {
      const double w = (x - x0) / (x1 - x0);
      const double d = (1.0 - w) * ys_[k - 1] + w * ys_[k];
      return first_moment ? x * d : d;
    };
    const double mid = 0.5 * (lo + hi);
    sum += (hi - lo) / 6.0 * (lin(lo) + 4.0 * lin(mid) + lin(hi));
  }
  return sum;
}

double KernelDensity::mass(double a, double b) const {
  a = std::max(a, lo_);
  b = std::min(b, hi_);
  if (!(b > a)) return 0.0;
  switch (family_) {
    case KernelFamily::Uniform: return (b - a) / (hi_ - lo_);
    case KernelFamily::ShiftedExponential: {
      // exp(-r(a-s)) - exp(-r(b-s)) without cancellation for narrow cells.
      const double head = std::exp(-rate_ * (a - lo_));
      if (!std::isfinite(b)) return head;
      return -head * std::expm1(-rate_ * (b - a));
    }
    case KernelFamily::Tabulated: return tabulated_integral(a, b, false);
  }
  return 0.0;
}

double KernelDensity::tail_mass(double x) const {
  if (x <= lo_) return 1.0;
  if (x >= hi_) return 0.0;
  if (family_ == KernelFamily::ShiftedExponential) return std::exp(-rate_ * (x - lo_));
  return mass(x, hi_);
}

double DiracComb::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double DiracComb::first_moment() const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * nodes[i];
  return s;
}

double DiracComb::min_node() const {
  if (nodes.empty()) throw std::logic_error("empty comb");
  return *std::min_element(nodes.begin(), nodes.end());
}

std::vector<double> build_grid(const KernelDensity& kernel, double truncation_point, std::size_t cells) {
  const double lo = kernel.support_lo();
  require(cells >= 1, "build_grid: number of cells must be >= 1");
  require(std::isfinite(truncation_point) && truncation_point > lo,
          "build_grid: truncation point must exceed the kernel's lower support bound");
  std::vector<double> grid(cells + 1);
  const double width = truncation_point - lo;
  for (std::size_t i = 0; i <= cells; ++i) {
    grid[i] = lo + static_cast<double>(i) * width / static_cast<double>(cells);
  }
  grid.back() = truncation_point;
  return grid;
}

DiracComb discretize(const KernelDensity& kernel, double truncation_point, std::size_t cells, NodeRule rule) {
  DiracComb comb;
  comb.grid = build_grid(kernel, truncation_point, cells);
  comb.nodes.resize(cells);
  comb.weights.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = comb.grid[i];
    const double b = comb.grid[i + 1];
    switch (rule) {
      case NodeRule::Midpoint: comb.nodes[i] = 0.5 * (a + b); break;
      case NodeRule::Left: comb.nodes[i] = a; break;
      case NodeRule::Right: comb.nodes[i] = b; break;
    }
    comb.weights[i] = kernel.mass(a, b);
  }
  comb.truncation_mass = kernel.tail_mass(truncation_point);
  return comb;
}

double truncation_bound(const KernelDensity& kernel, double bound_h, double epsilon) {
  require(kernel.family() == KernelFamily::ShiftedExponential,
          "truncation_bound: closed form exists only for the shifted-exponential family; supply M explicitly");
  require(std::isfinite(bound_h) && bound_h > 0.0, "truncation_bound: bound on H must be > 0");
  require(std::isfinite(epsilon) && epsilon > 0.0, "truncation_bound: epsilon must be > 0");
  const double excess = std::log(bound_h / epsilon) / kernel.rate();
  return kernel.support_lo() + std::max(0.0, excess);
}

double mean_delay(const KernelDensity& kernel) {
  switch (kernel.family()) {
    case KernelFamily::Uniform: return 0.5 * (kernel.support_lo() + kernel.support_hi());
    case KernelFamily::ShiftedExponential: return kernel.support_lo() + 1.0 / kernel.rate();
    case KernelFamily::Tabulated: break;
  }
  // Tabulated: exact for piecewise-linear densities.
  const auto& xs = kernel.table_abscissae();
  double sum = 0.0;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const double a = xs[k - 1], b = xs[k], m = 0.5 * (a + b);
    sum += (b - a) / 6.0 * (a * kernel.density(a) + 4.0 * m * kernel.density(m) + b * kernel.density(b));
  }
  if (!std::isfinite(sum)) throw std::domain_error("mean_delay: first moment is undefined");
  return sum;
}

}  // namespace edelay
