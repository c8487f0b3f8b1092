#include "config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace edelay::cli {

namespace pt = boost::property_tree;

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::SimulateDiscrete: return "simulate-discrete";
    case Mode::SimulateReference: return "simulate-reference";
    case Mode::SimulateOracle: return "simulate-oracle";
    case Mode::Converge: return "converge";
    case Mode::Bench: return "bench";
    case Mode::KernelCheck: return "kernel-check";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::SimulateDiscrete, Mode::SimulateReference, Mode::SimulateOracle, Mode::Converge, Mode::Bench,
                 Mode::KernelCheck}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown mode '" + std::string(name) +
                              "' (simulate-discrete, simulate-reference, simulate-oracle, converge, bench, "
                              "kernel-check)");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  }
  return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  }
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), nullptr, 10);
  if (errno == ERANGE) throw ConfigError(key, "integer out of range: '" + text + "'");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

// Wraps library parse/validation errors with the offending key.
template <class Fn>
auto keyed(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

class Section {
 public:
  Section(std::string name, const pt::ptree* tree, std::set<std::string> allowed)
      : name_(std::move(name)), tree_(tree), allowed_(std::move(allowed)) {
    if (!tree_) return;
    for (const auto& [key, child] : *tree_) {
      if (!allowed_.count(key)) throw ConfigError(name_ + "." + key, "unknown key");
      if (!child.empty()) throw ConfigError(name_ + "." + key, "nested values are not supported");
    }
  }

  std::string key(const std::string& k) const { return name_ + "." + k; }

  std::optional<std::string> raw(const std::string& k) const {
    if (!tree_) return std::nullopt;
    if (auto v = tree_->get_optional<std::string>(pt::ptree::path_type(k, '\0'))) return trim(*v);
    return std::nullopt;
  }

  void number(const std::string& k, double& out) const {
    if (auto v = raw(k)) out = to_double(key(k), *v);
  }
  void count(const std::string& k, std::size_t& out) const {
    if (auto v = raw(k)) out = to_count(key(k), *v);
  }
  std::optional<double> optional_number(const std::string& k) const {
    if (auto v = raw(k)) return to_double(key(k), *v);
    return std::nullopt;
  }

 private:
  std::string name_;
  const pt::ptree* tree_;
  std::set<std::string> allowed_;
};

KernelBlock parse_kernel(const Section& sec, KernelBlock block, double default_shift, double default_rate) {
  const std::string family_name = sec.raw("family").value_or("shifted-exponential");
  const KernelFamily family = keyed(sec.key("family"), [&] { return parse_kernel_family(family_name); });

  switch (family) {
    case KernelFamily::ShiftedExponential: {
      double shift = default_shift, rate = default_rate;
      sec.number("sigma", shift);
      sec.number("lambda", rate);
      block.kernel = keyed(sec.key("sigma"), [&] { return KernelDensity::shifted_exponential(shift, rate); });
      break;
    }
    case KernelFamily::Uniform: {
      if (!sec.raw("lo") || !sec.raw("hi")) throw ConfigError(sec.key("lo"), "uniform kernel needs lo and hi");
      double lo = 0, hi = 0;
      sec.number("lo", lo);
      sec.number("hi", hi);
      block.kernel = keyed(sec.key("lo"), [&] { return KernelDensity::uniform(lo, hi); });
      block.truncation = hi;
      break;
    }
    case KernelFamily::Tabulated: {
      const auto table = sec.raw("table");
      if (!table) throw ConfigError(sec.key("table"), "tabulated kernel needs 'table = x:y, x:y, ...'");
      std::vector<double> xs, ys;
      for (const auto& item : split(*table, ',')) {
        const auto xy = split(item, ':');
        if (xy.size() != 2) throw ConfigError(sec.key("table"), "entry '" + item + "' is not of the form x:y");
        xs.push_back(to_double(sec.key("table"), xy[0]));
        ys.push_back(to_double(sec.key("table"), xy[1]));
      }
      block.kernel = keyed(sec.key("table"), [&] { return KernelDensity::tabulated(xs, ys); });
      block.truncation = block.kernel.support_hi();
      break;
    }
  }

  if (auto m = sec.raw("M")) {
    if (*m == "auto") {
      double bound_h = 0.0, epsilon = 1.0;
      if (!sec.raw("bound_H")) throw ConfigError(sec.key("bound_H"), "M = auto needs bound_H");
      sec.number("bound_H", bound_h);
      sec.number("epsilon", epsilon);
      block.truncation = keyed(sec.key("M"), [&] { return truncation_bound(block.kernel, bound_h, epsilon); });
    } else {
      block.truncation = to_double(sec.key("M"), *m);
    }
  }
  sec.count("j", block.cells);
  if (auto rule = sec.raw("node_rule")) block.node_rule = keyed(sec.key("node_rule"), [&] { return parse_node_rule(*rule); });
  return block;
}

std::vector<double> parse_number_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(key, item));
  return out;
}

}  // namespace

ExperimentSetup RunConfig::experiment() const {
  ExperimentSetup s;
  s.params = params;
  s.history = history;
  s.phi = phi.kernel;
  s.psi = psi.kernel;
  s.phi_truncation = phi.truncation;
  s.psi_truncation = psi.truncation;
  s.node_rule = phi.node_rule;
  s.t_end = t_end;
  s.step = step;
  s.reference = reference;
  s.threads = threads;
  return s;
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }

  const std::map<std::string, std::set<std::string>> schema{
      {"model", {"gamma", "N0", "beta0", "I_FR", "p", "mu", "c_I", "c_S"}},
      {"phi", {"family", "sigma", "lambda", "lo", "hi", "table", "M", "bound_H", "epsilon", "j", "node_rule"}},
      {"psi", {"family", "sigma", "lambda", "lo", "hi", "table", "M", "bound_H", "epsilon", "j", "node_rule"}},
      {"solver", {"step", "t_end", "output_stride"}},
      {"experiment",
       {"mode", "pairs", "out_dir", "reference", "threads", "bench_horizons", "bench_repeats", "bench_quadrature",
        "check_cells"}}};
  for (const auto& [name, child] : tree) {
    if (child.empty() && !child.data().empty()) throw ConfigError(name, "key outside of any section");
    if (!schema.count(name)) throw ConfigError(name, "unknown section");
  }
  auto section = [&](const std::string& name) {
    const auto it = tree.find(name);
    return Section(name, it == tree.not_found() ? nullptr : &it->second, schema.at(name));
  };

  RunConfig cfg;
  cfg.source_text = text;

  const Section model = section("model");
  double gamma = 0.1, n0 = 1e7, i_fr = 0.425, p = 0.9;
  model.number("gamma", gamma);
  model.number("N0", n0);
  double beta0 = 0.5 / n0;
  model.number("beta0", beta0);
  model.number("I_FR", i_fr);
  model.number("p", p);
  cfg.params = keyed(model.key("I_FR"),
                     [&] { return ModelParams::with_derived_mu(constant_rate(beta0), gamma, i_fr, p, n0); });
  if (auto mu = model.optional_number("mu")) cfg.params.mu = *mu;
  model.number("c_I", cfg.history.c_i);
  cfg.history.c_s = model.optional_number("c_S");

  cfg.phi = parse_kernel(section("phi"), cfg.phi, 10.0, 0.1);
  cfg.psi = parse_kernel(section("psi"), cfg.psi, 5.0, 0.2);

  const Section solver = section("solver");
  solver.number("step", cfg.step);
  solver.number("t_end", cfg.t_end);
  solver.count("output_stride", cfg.output_stride);

  const Section exp = section("experiment");
  if (auto mode = exp.raw("mode")) cfg.mode = keyed(exp.key("mode"), [&] { return parse_mode(*mode); });
  if (auto pairs = exp.raw("pairs")) {
    cfg.pairs.clear();
    for (const auto& item : split(*pairs, ',')) {
      const auto nm = split(item, ':');
      if (nm.size() != 2) throw ConfigError(exp.key("pairs"), "entry '" + item + "' is not of the form n_tau:n_rho");
      cfg.pairs.push_back({to_count(exp.key("pairs"), nm[0]), to_count(exp.key("pairs"), nm[1])});
    }
  }
  if (auto dir = exp.raw("out_dir")) cfg.out_dir = *dir;
  if (auto ref = exp.raw("reference")) cfg.reference = keyed(exp.key("reference"), [&] { return parse_reference_kind(*ref); });
  if (auto threads = exp.raw("threads")) cfg.threads = static_cast<unsigned>(to_count(exp.key("threads"), *threads));
  if (auto h = exp.raw("bench_horizons")) cfg.bench_horizons = parse_number_list(exp.key("bench_horizons"), *h);
  if (auto r = exp.raw("bench_repeats")) cfg.bench_repeats = static_cast<unsigned>(to_count(exp.key("bench_repeats"), *r));
  if (auto q = exp.raw("bench_quadrature")) cfg.bench_quadrature = to_bool(exp.key("bench_quadrature"), *q);
  if (auto cells = exp.raw("check_cells")) {
    cfg.check_cells.clear();
    for (const auto& item : split(*cells, ',')) cfg.check_cells.push_back(to_count(exp.key("check_cells"), item));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

void check_kernel(const KernelBlock& block, const std::string& name, bool needs_exponential) {
  const auto& k = block.kernel;
  if (!(block.truncation > k.support_lo())) throw ConfigError(name + ".M", "must exceed the kernel's lower support bound");
  if (k.bounded() && block.truncation > k.support_hi() * (1.0 + 1e-12)) {
    throw ConfigError(name + ".M", "exceeds the kernel's upper support bound");
  }
  if (block.cells == 0) throw ConfigError(name + ".j", "must be >= 1");
  if (needs_exponential && k.family() != KernelFamily::ShiftedExponential) {
    throw ConfigError(name + ".family", "the continuous reference needs the shifted-exponential family");
  }
}

void check_combs_fit_step(const RunConfig& cfg, LagPair pair, const std::string& key) {
  const DiracComb rho = discretize(cfg.phi.kernel, cfg.phi.truncation, pair.n_rho, cfg.phi.node_rule);
  const DiracComb tau = discretize(cfg.psi.kernel, cfg.psi.truncation, pair.n_tau, cfg.psi.node_rule);
  const double min_lag = std::min(rho.min_node(), tau.min_node());
  if (!(cfg.step <= min_lag / 4.0)) {
    throw ConfigError(key, "solver.step exceeds a quarter of the smallest lag " + std::to_string(min_lag) + " for (" +
                               std::to_string(pair.n_tau) + "," + std::to_string(pair.n_rho) + ")");
  }
}

}  // namespace

void validate(const RunConfig& cfg) {
  try {
    cfg.params.validate();
  } catch (const std::invalid_argument& e) {
    // Library messages start with the offending key, e.g. "model.p: ...".
    const std::string what = e.what();
    const auto colon = what.find(':');
    if (colon == std::string::npos || what.compare(0, 6, "model.") != 0) throw ConfigError("model", what);
    throw ConfigError(what.substr(0, colon), what.substr(colon + 2));
  }
  if (!(cfg.history.c_i >= 0.0)) throw ConfigError("model.c_I", "must be >= 0");
  if (cfg.history.c_s && !(*cfg.history.c_s > 0.0)) throw ConfigError("model.c_S", "must be > 0");
  if (!(cfg.step > 0.0)) throw ConfigError("solver.step", "must be > 0");
  if (!(cfg.t_end > 0.0)) throw ConfigError("solver.t_end", "must be > 0");
  if (cfg.output_stride == 0) throw ConfigError("solver.output_stride", "must be >= 1");

  const bool continuous = cfg.mode == Mode::SimulateReference || cfg.mode == Mode::SimulateOracle ||
                          cfg.mode == Mode::Converge || cfg.mode == Mode::Bench;
  check_kernel(cfg.phi, "phi", continuous);
  check_kernel(cfg.psi, "psi", continuous);
  if (cfg.phi.node_rule != cfg.psi.node_rule && (cfg.mode == Mode::Converge || cfg.mode == Mode::Bench)) {
    throw ConfigError("psi.node_rule", "sweeps use one node rule for both kernels; set phi and psi alike");
  }

  // Initial conditions must be admissible for whichever means the mode uses.
  if (continuous) {
    keyed("model", [&] {
      return initial_conditions(cfg.params, cfg.history, mean_delay(cfg.psi.kernel), mean_delay(cfg.phi.kernel));
    });
    const double min_shift = std::min(cfg.phi.kernel.support_lo(), cfg.psi.kernel.support_lo());
    if (!(cfg.step <= min_shift / 4.0)) throw ConfigError("solver.step", "exceeds a quarter of the smallest kernel shift");
  }

  switch (cfg.mode) {
    case Mode::SimulateDiscrete:
      check_combs_fit_step(cfg, {cfg.psi.cells, cfg.phi.cells}, "phi.j");
      break;
    case Mode::Converge:
      if (cfg.pairs.empty()) throw ConfigError("experiment.pairs", "needs at least one pair");
      for (const auto& pair : cfg.pairs) {
        if (pair.n_tau == 0 || pair.n_rho == 0) throw ConfigError("experiment.pairs", "counts must be >= 1");
        check_combs_fit_step(cfg, pair, "experiment.pairs");
      }
      break;
    case Mode::Bench:
      if (cfg.bench_horizons.empty()) throw ConfigError("experiment.bench_horizons", "needs at least one horizon");
      for (double h : cfg.bench_horizons) {
        if (!(h > 0.0)) throw ConfigError("experiment.bench_horizons", "horizons must be > 0");
      }
      if (cfg.bench_repeats == 0) throw ConfigError("experiment.bench_repeats", "must be >= 1");
      check_combs_fit_step(cfg, {100, 200}, "experiment.bench_horizons");
      break;
    case Mode::KernelCheck:
      for (std::size_t j : cfg.check_cells) {
        if (j == 0) throw ConfigError("experiment.check_cells", "cell counts must be >= 1");
      }
      break;
    case Mode::SimulateReference:
    case Mode::SimulateOracle:
      break;
  }
}

}  // namespace edelay::cli
