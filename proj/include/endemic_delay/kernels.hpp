#pragma once

#include <concepts>
#include <cstddef>
#include <string_view>
#include <vector>

namespace edelay {

enum class KernelFamily { Uniform, ShiftedExponential, Tabulated };

/// Where a comb node sits inside its grid cell.
enum class NodeRule { Midpoint, Left, Right };

std::string_view to_string(KernelFamily family);
std::string_view to_string(NodeRule rule);
KernelFamily parse_kernel_family(std::string_view name);
NodeRule parse_node_rule(std::string_view name);

/// Probability density of a delay (latency or temporary immunity), supported
/// on [support_lo, support_hi] with support_lo > 0 and unit total mass.
///
/// Three families exist:
///   - uniform on [lo, hi], used mainly as a test oracle;
///   - shifted exponential rate*exp(-rate*(x - shift)) on [shift, inf);
///   - tabulated, a piecewise-linear density through user samples, rescaled
///     to unit mass at construction.
///
/// Instances are immutable.
class KernelDensity {
 public:
  static KernelDensity uniform(double lo, double hi);
  static KernelDensity shifted_exponential(double shift, double rate);
  static KernelDensity tabulated(std::vector<double> abscissae, std::vector<double> values);

  KernelFamily family() const noexcept { return family_; }
  double support_lo() const noexcept { return lo_; }
  /// +infinity for the shifted exponential.
  double support_hi() const noexcept { return hi_; }
  /// Decay rate of the shifted exponential; 0 for the other families.
  double rate() const noexcept { return rate_; }
  bool bounded() const noexcept;

  double density(double x) const;
  /// Mass on [a, b] intersected with the support.
  double mass(double a, double b) const;
  /// Mass on [x, inf).
  double tail_mass(double x) const;

  const std::vector<double>& table_abscissae() const noexcept { return xs_; }
  const std::vector<double>& table_values() const noexcept { return ys_; }

 private:
  KernelDensity() = default;

  double tabulated_integral(double a, double b, bool first_moment) const;

  KernelFamily family_ = KernelFamily::Uniform;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double rate_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Weighted point masses approximating a kernel on [grid.front(), grid.back()].
/// nodes[i] lies in [grid[i], grid[i+1]] and weights[i] is the kernel mass of
/// that cell. Mass beyond the last breakpoint is kept in truncation_mass and is
/// not redistributed.
struct DiracComb {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> grid;
  double truncation_mass = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }
  double total_weight() const;
  /// sum_i weights[i] * nodes[i]; replaces the kernel mean in the discrete model.
  double first_moment() const;
  double min_node() const;
};

/// Breakpoints lo + i*(truncation_point - lo)/cells, i = 0..cells.
std::vector<double> build_grid(const KernelDensity& kernel, double truncation_point, std::size_t cells);

DiracComb discretize(const KernelDensity& kernel, double truncation_point, std::size_t cells,
                     NodeRule rule = NodeRule::Midpoint);

/// Integral of fn against the comb measure: sum_i fn(nodes[i]) * weights[i].
template <std::invocable<double> Fn>
double comb_integrate(const DiracComb& comb, Fn&& fn) {
  double sum = 0.0;
  for (std::size_t i = 0; i < comb.nodes.size(); ++i) sum += fn(comb.nodes[i]) * comb.weights[i];
  return sum;
}

/// Smallest truncation point M with bound_h * tail_mass(M) <= epsilon.
/// Closed form only for the shifted exponential: M = shift + ln(bound_h/epsilon)/rate.
double truncation_bound(const KernelDensity& kernel, double bound_h, double epsilon = 1.0);

/// First moment of the density.
double mean_delay(const KernelDensity& kernel);

}  // namespace edelay
