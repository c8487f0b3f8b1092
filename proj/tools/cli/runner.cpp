#include "runner.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "svg.hpp"

namespace edelay::cli {

namespace {

double apply(TestFunction fn, double x) { return fn == TestFunction::Square ? x * x : std::exp(-x / 20.0); }

// Five-point Gauss-Legendre on [a, b].
template <class F>
double gauss5(F&& f, double a, double b) {
  static constexpr std::array<double, 5> x{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                           0.9061798459386640};
  static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                           0.2369268850561891, 0.2369268850561891};
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < 5; ++k) s += w[k] * f(c + r * x[k]);
  return r * s;
}

class Writer {
 public:
  Writer(std::filesystem::path dir, std::ostream& log, bool quiet) : dir_(std::move(dir)), log_(log), quiet_(quiet) {
    std::filesystem::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    io::atomic_write(dir_ / name, content);
    files_.push_back(name);
    if (!quiet_) log_ << "  wrote " << (dir_ / name).string() << '\n';
  }

  std::vector<std::string> files() const { return files_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::ostream& log_;
  bool quiet_;
  std::vector<std::string> files_;
};

std::string trajectory_csv(const Trajectory& traj, std::size_t stride) {
  std::vector<io::Column> extra;
  for (std::size_t a = 0; a < traj.aux_names().size(); ++a) {
    extra.push_back({traj.aux_names()[a], [&traj, a](std::size_t k) { return traj.value(k, kNumCompartments + a); }});
  }
  std::ostringstream out;
  io::write_trajectory_csv(out, traj, stride, extra);
  return out.str();
}

Series compartment_series(const Trajectory& traj, Compartment c, std::size_t stride, std::string name) {
  Series s{std::move(name), {}, {}};
  for (std::size_t k = 0; k < traj.size(); k += stride) {
    s.x.push_back(traj.times()[k]);
    s.y.push_back(traj.value(k, index(c)));
  }
  return s;
}

std::string trajectory_svg(const Trajectory& traj, const std::string& title, std::size_t stride) {
  std::vector<Series> series;
  for (Compartment c : kAllCompartments) series.push_back(compartment_series(traj, c, stride, std::string(to_string(c))));
  return line_plot({title, "t (days)", "individuals", false, false}, series);
}

// Plot resolution independent of the CSV stride: about 1000 points per curve.
std::size_t plot_stride(const Trajectory& traj) { return std::max<std::size_t>(1, traj.size() / 1000); }

std::string pair_label(LagPair p) {
  return "(" + std::to_string(p.n_tau) + "," + std::to_string(p.n_rho) + ")";
}

void simulate(const RunConfig& cfg, Writer& out, std::ostream& log, bool quiet) {
  Trajectory traj = [&] {
    switch (cfg.mode) {
      case Mode::SimulateDiscrete: {
        const DiracComb rho = discretize(cfg.phi.kernel, cfg.phi.truncation, cfg.phi.cells, cfg.phi.node_rule);
        const DiracComb tau = discretize(cfg.psi.kernel, cfg.psi.truncation, cfg.psi.cells, cfg.psi.node_rule);
        return solve_discrete(cfg.params, cfg.history, rho, tau, cfg.t_end, cfg.step);
      }
      case Mode::SimulateReference:
        return solve_reference(cfg.params, cfg.history, cfg.phi.kernel, cfg.psi.kernel, cfg.t_end, cfg.step);
      default:
        return solve_chain_oracle(cfg.params, cfg.history, cfg.phi.kernel, cfg.psi.kernel, cfg.t_end, cfg.step);
    }
  }();
  if (!quiet) {
    const auto peak = peak_values(traj, 0.0, cfg.t_end, std::min(kDefaultErrorGrid, cfg.t_end));
    log << "  " << traj.size() << " knots; peak I = " << io::format_double(peak[index(Compartment::I)]) << '\n';
  }
  out.write("trajectory.csv", trajectory_csv(traj, cfg.output_stride));
  out.write("trajectory.svg", trajectory_svg(traj, std::string(to_string(cfg.mode)), plot_stride(traj)));
}

void converge(const RunConfig& cfg, Writer& out, std::ostream& log, bool quiet) {
  const ExperimentSetup setup = cfg.experiment();
  const ConvergenceReport report = convergence_sweep(setup, cfg.pairs, SweepOptions{true});

  std::ostringstream csv;
  io::write_report_csv(csv, report, false);
  out.write("report.csv", csv.str());

  std::ostringstream timing;
  timing << "solver,n_tau,n_rho,wall_ms\n";
  timing << to_string(report.reference.kind) << ",,,"
         << io::format_double(std::round(report.reference.wall_seconds * 1e6) / 1e3) << '\n';
  for (const auto& e : report.entries) {
    timing << "discrete," << e.pair.n_tau << ',' << e.pair.n_rho << ','
           << io::format_double(std::round(e.wall_seconds * 1e6) / 1e3) << '\n';
  }
  out.write("sweep_timing.csv", timing.str());
  out.write("reference.csv", trajectory_csv(*report.reference_trajectory, cfg.output_stride));

  const auto& ref = *report.reference_trajectory;
  std::vector<Series> curves{compartment_series(ref, Compartment::I, plot_stride(ref), "reference")};
  Series errors{"rel. sup error of I", {}, {}};
  std::vector<double> ns, errs;
  for (const auto& e : report.entries) {
    if (!e.ok()) {
      if (!quiet) log << "  " << pair_label(e.pair) << " failed: " << e.failure << '\n';
      continue;
    }
    curves.push_back(compartment_series(*e.trajectory, Compartment::I, plot_stride(*e.trajectory), pair_label(e.pair)));
    const double err = e.rel_sup_err[index(Compartment::I)];
    errors.x.push_back(static_cast<double>(e.pair.n_tau));
    errors.y.push_back(err);
    if (!quiet) log << "  " << pair_label(e.pair) << " rel. sup error of I = " << io::format_double(err) << '\n';
    if (err > 0.0) {
      ns.push_back(static_cast<double>(e.pair.n_tau));
      errs.push_back(err);
    }
  }
  out.write("infected.svg", line_plot({"I(t): reference and discrete (N_tau,N_rho)", "t (days)", "I", false, false}, curves));
  out.write("convergence.svg", line_plot({"Convergence on I", "N_tau", "sup |I - I_ref| / peak", true, true}, {errors}));
  if (!quiet && ns.size() >= 2) log << "  observed order in N_tau: " << io::format_double(observed_order(ns, errs)) << '\n';
}

void bench(const RunConfig& cfg, Writer& out, std::ostream& log, bool quiet) {
  BenchmarkOptions opts;
  opts.horizons = cfg.bench_horizons;
  opts.repeats = cfg.bench_repeats;
  opts.include_quadrature = cfg.bench_quadrature;
  const auto rows = benchmark(cfg.experiment(), opts);
  std::ostringstream csv;
  io::write_timing_csv(csv, rows);
  out.write("timing.csv", csv.str());
  if (!quiet) {
    for (const auto& r : rows) {
      log << "  " << r.solver << " t_end=" << io::format_double(r.t_end) << ": "
          << io::format_double(std::round(r.best_seconds * 1e6) / 1e3) << " ms\n";
    }
  }
}

void kernel_check(const RunConfig& cfg, Writer& out) {
  std::ostringstream table;
  table << "kernel,rule,j,weight_sum,truncation_mass,rel_err_square,rel_err_decay\n";
  for (const auto& [name, block] : {std::pair{"phi", &cfg.phi}, std::pair{"psi", &cfg.psi}}) {
    std::ostringstream comb_csv;
    io::write_comb_csv(comb_csv, discretize(block->kernel, block->truncation, block->cells, block->node_rule));
    out.write(std::string(name) + "_comb.csv", comb_csv.str());

    const double exact_sq = truncated_integral(block->kernel, block->truncation, TestFunction::Square);
    const double exact_dec = truncated_integral(block->kernel, block->truncation, TestFunction::Decay);
    for (NodeRule rule : {NodeRule::Midpoint, NodeRule::Left, NodeRule::Right}) {
      for (std::size_t j : cfg.check_cells) {
        const DiracComb comb = discretize(block->kernel, block->truncation, j, rule);
        const double sq = comb_integrate(comb, [](double x) { return apply(TestFunction::Square, x); });
        const double dec = comb_integrate(comb, [](double x) { return apply(TestFunction::Decay, x); });
        table << name << ',' << to_string(rule) << ',' << j << ',' << io::format_double(comb.total_weight()) << ','
              << io::format_double(comb.truncation_mass) << ','
              << io::format_double(std::abs(sq - exact_sq) / std::abs(exact_sq)) << ','
              << io::format_double(std::abs(dec - exact_dec) / std::abs(exact_dec)) << '\n';
      }
    }
  }
  out.write("kernel_check.csv", table.str());
}

std::string manifest(const RunConfig& cfg, const std::vector<std::string>& files) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(io::fnv1a64(cfg.source_text)));
  std::ostringstream m;
  m << "endemic-delay " << ENDEMIC_DELAY_VERSION << '\n';
  m << "mode: " << to_string(cfg.mode) << '\n';
  m << "config_fnv1a64: " << hash << '\n';
  m << "files:\n";
  for (const auto& f : files) m << "  " << f << '\n';
  m << "Solvers are fixed-step and deterministic; every file except timing.csv and sweep_timing.csv is\n"
       "byte-identical across reruns of the same config.\n";
  return m.str();
}

}  // namespace

double truncated_integral(const KernelDensity& kernel, double truncation, TestFunction fn) {
  const double lo = kernel.support_lo();
  const double m = std::min(truncation, kernel.support_hi());
  switch (kernel.family()) {
    case KernelFamily::ShiftedExponential: {
      const double r = kernel.rate();
      if (fn == TestFunction::Square) {
        auto anti = [&](double x) { return -std::exp(-r * (x - lo)) * (x * x + 2.0 * x / r + 2.0 / (r * r)); };
        return anti(m) - anti(lo);
      }
      const double a = r + 1.0 / 20.0;
      return r * std::exp(-lo / 20.0) * (-std::expm1(-a * (m - lo))) / a;
    }
    case KernelFamily::Uniform: {
      const double width = kernel.support_hi() - lo;
      if (fn == TestFunction::Square) return (m * m * m - lo * lo * lo) / 3.0 / width;
      return 20.0 * (std::exp(-lo / 20.0) - std::exp(-m / 20.0)) / width;
    }
    case KernelFamily::Tabulated: {
      const auto& xs = kernel.table_abscissae();
      double sum = 0.0;
      for (std::size_t k = 1; k < xs.size(); ++k) {
        const double a = xs[k - 1], b = std::min(xs[k], m);
        if (!(b > a)) break;
        // Interpolate inside the cell so the kink at xs[k] is never straddled.
        const double ya = kernel.table_values()[k - 1], yb = kernel.table_values()[k];
        auto dens = [&](double x) { return ya + (yb - ya) * (x - a) / (xs[k] - a); };
        sum += gauss5([&](double x) { return dens(x) * apply(fn, x); }, a, b);
      }
      return sum;
    }
  }
  return 0.0;
}

RunResult run(RunConfig cfg, const RunOptions& options, std::ostream& log) {
  if (options.mode) cfg.mode = *options.mode;
  if (options.out_dir) {
    cfg.out_dir = *options.out_dir;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    cfg.out_dir = env;
  }
  validate(cfg);

  if (!options.quiet) log << "mode " << to_string(cfg.mode) << " -> " << cfg.out_dir.string() << '\n';
  Writer out(cfg.out_dir, log, options.quiet);
  switch (cfg.mode) {
    case Mode::SimulateDiscrete:
    case Mode::SimulateReference:
    case Mode::SimulateOracle: simulate(cfg, out, log, options.quiet); break;
    case Mode::Converge: converge(cfg, out, log, options.quiet); break;
    case Mode::Bench: bench(cfg, out, log, options.quiet); break;
    case Mode::KernelCheck: kernel_check(cfg, out); break;
  }
  out.write("manifest.txt", manifest(cfg, out.files()));
  return {out.dir(), out.files()};
}

int run_from_file(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& log,
                  std::ostream& err) {
  try {
    run(load_config(config_path), options, log);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace edelay::cli
