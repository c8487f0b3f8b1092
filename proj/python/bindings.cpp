#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "endemic_delay/endemic_delay.hpp"

namespace py = pybind11;
using namespace edelay;

namespace {

py::array_t<double> to_numpy(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

// (knots, width) array of stored values or derivatives.
py::array_t<double> knot_table(const Trajectory& traj, bool derivatives) {
  const auto n = static_cast<py::ssize_t>(traj.size());
  const auto w = static_cast<py::ssize_t>(traj.width());
  py::array_t<double> out({n, w});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t k = 0; k < n; ++k) {
    for (py::ssize_t c = 0; c < w; ++c) {
      const auto kk = static_cast<std::size_t>(k), cc = static_cast<std::size_t>(c);
      view(k, c) = derivatives ? traj.derivative(kk, cc) : traj.value(kk, cc);
    }
  }
  return out;
}

std::size_t component_index(const Trajectory& traj, const std::string& name) {
  for (std::size_t c = 0; c < kNumCompartments; ++c) {
    if (kCompartmentNames[c] == name) return c;
  }
  const auto& aux = traj.aux_names();
  for (std::size_t a = 0; a < aux.size(); ++a) {
    if (aux[a] == name) return kNumCompartments + a;
  }
  throw py::key_error("no component named '" + name + "'");
}

py::array_t<double> eval_many(const Trajectory& traj, py::array_t<double, py::array::forcecast> ts,
                              std::size_t component) {
  auto in = ts.unchecked<1>();
  py::array_t<double> out(in.shape(0));
  auto res = out.mutable_unchecked<1>();
  for (py::ssize_t k = 0; k < in.shape(0); ++k) res(k) = traj.at(traj.sample(in(k)), component);
  return out;
}

py::list errors_to_list(const CompartmentErrors& e) {
  py::list out;
  for (double v : e) out.append(v);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete-lag and continuous-kernel solvers for an endemic SLIRD model with distributed delays";
  m.attr("__version__") = ENDEMIC_DELAY_VERSION;

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::enum_<NodeRule>(m, "NodeRule")
      .value("MIDPOINT", NodeRule::Midpoint)
      .value("LEFT", NodeRule::Left)
      .value("RIGHT", NodeRule::Right);

  py::enum_<Compartment>(m, "Compartment")
      .value("S", Compartment::S)
      .value("L", Compartment::L)
      .value("I", Compartment::I)
      .value("RT", Compartment::RT)
      .value("RP", Compartment::RP)
      .value("D", Compartment::D);

  py::enum_<ReferenceKind>(m, "ReferenceKind")
      .value("CHAIN_ORACLE", ReferenceKind::ChainOracle)
      .value("QUADRATURE", ReferenceKind::Quadrature);

  py::class_<KernelDensity>(m, "KernelDensity")
      .def_static("uniform", &KernelDensity::uniform, py::arg("lo"), py::arg("hi"))
      .def_static("shifted_exponential", &KernelDensity::shifted_exponential, py::arg("shift"), py::arg("rate"))
      .def_static("tabulated", &KernelDensity::tabulated, py::arg("abscissae"), py::arg("values"))
      .def_property_readonly("family", [](const KernelDensity& k) { return std::string(to_string(k.family())); })
      .def_property_readonly("support_lo", &KernelDensity::support_lo)
      .def_property_readonly("support_hi", &KernelDensity::support_hi)
      .def_property_readonly("rate", &KernelDensity::rate)
      .def("density", &KernelDensity::density, py::arg("x"))
      .def("mass", &KernelDensity::mass, py::arg("a"), py::arg("b"))
      .def("tail_mass", &KernelDensity::tail_mass, py::arg("x"));

  py::class_<DiracComb>(m, "DiracComb")
      .def_property_readonly("nodes", [](const DiracComb& c) { return to_numpy(c.nodes); })
      .def_property_readonly("weights", [](const DiracComb& c) { return to_numpy(c.weights); })
      .def_property_readonly("grid", [](const DiracComb& c) { return to_numpy(c.grid); })
      .def_readonly("truncation_mass", &DiracComb::truncation_mass)
      .def("__len__", &DiracComb::size)
      .def("total_weight", &DiracComb::total_weight)
      .def("first_moment", &DiracComb::first_moment);

  m.def("discretize", &discretize, py::arg("kernel"), py::arg("truncation_point"), py::arg("cells"),
        py::arg("rule") = NodeRule::Midpoint);
  m.def("truncation_bound", &truncation_bound, py::arg("kernel"), py::arg("bound_h"), py::arg("epsilon") = 1.0);
  m.def("mean_delay", &mean_delay, py::arg("kernel"));
  m.def("derive_mu", &derive_mu, py::arg("gamma"), py::arg("i_fr"));

  // Only constant contact rates cross the boundary: solver threads must not
  // call back into Python.
  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double beta0, double gamma, double i_fr, double p, double n0) {
             return ModelParams::with_derived_mu(constant_rate(beta0), gamma, i_fr, p, n0);
           }),
           py::arg("beta0"), py::arg("gamma"), py::arg("i_fr"), py::arg("p"), py::arg("n0"))
      .def_static("baseline", &ModelParams::baseline)
      .def_property_readonly("beta0", &ModelParams::beta0)
      .def_readonly("gamma", &ModelParams::gamma)
      .def_readonly("mu", &ModelParams::mu)
      .def_readonly("p", &ModelParams::p)
      .def_readonly("i_fr", &ModelParams::i_fr)
      .def_readonly("n0", &ModelParams::n0)
      .def("validate", &ModelParams::validate);

  py::class_<HistoryData>(m, "HistoryData")
      .def(py::init([](double c_i, std::optional<double> c_s) { return HistoryData{c_i, c_s}; }), py::arg("c_i"),
           py::arg("c_s") = py::none())
      .def_readwrite("c_i", &HistoryData::c_i)
      .def_readwrite("c_s", &HistoryData::c_s);

  m.def(
      "initial_conditions",
      [](const ModelParams& params, const HistoryData& hist, double psi_mean, double phi_mean) {
        py::dict out;
        const auto x = initial_conditions(params, hist, psi_mean, phi_mean).to_array();
        for (std::size_t c = 0; c < kNumCompartments; ++c) out[py::str(std::string(kCompartmentNames[c]))] = x[c];
        return out;
      },
      py::arg("params"), py::arg("history"), py::arg("psi_mean"), py::arg("phi_mean"));

  py::class_<Trajectory, std::shared_ptr<Trajectory>>(m, "Trajectory")
      .def_property_readonly("times", [](const Trajectory& t) { return to_numpy(t.times()); })
      .def_property_readonly("values", [](const Trajectory& t) { return knot_table(t, false); })
      .def_property_readonly("derivatives", [](const Trajectory& t) { return knot_table(t, true); })
      .def_property_readonly("components",
                             [](const Trajectory& t) {
                               std::vector<std::string> names(kCompartmentNames.begin(), kCompartmentNames.end());
                               for (const auto& a : t.aux_names()) names.push_back(a);
                               return names;
                             })
      .def_property_readonly("t_end", &Trajectory::t_end)
      .def("__len__", &Trajectory::size)
      .def(
          "eval", [](const Trajectory& t, double time, const std::string& name) {
            return t.at(t.sample(time), component_index(t, name));
          },
          py::arg("t"), py::arg("component"))
      .def(
          "eval", [](const Trajectory& t, py::array_t<double, py::array::forcecast> times, const std::string& name) {
            return eval_many(t, times, component_index(t, name));
          },
          py::arg("t"), py::arg("component"));

  m.def(
      "solve_discrete",
      [](const ModelParams& params, const HistoryData& hist, const DiracComb& rho, const DiracComb& tau, double t_end,
         double step) {
        py::gil_scoped_release release;
        return std::make_shared<Trajectory>(solve_discrete(params, hist, rho, tau, t_end, step));
      },
      py::arg("params"), py::arg("history"), py::arg("comb_rho"), py::arg("comb_tau"), py::arg("t_end"),
      py::arg("step") = kDefaultStep);

  m.def(
      "solve_reference",
      [](const ModelParams& params, const HistoryData& hist, const KernelDensity& phi, const KernelDensity& psi,
         double t_end, double step) {
        py::gil_scoped_release release;
        return std::make_shared<Trajectory>(solve_reference(params, hist, phi, psi, t_end, step));
      },
      py::arg("params"), py::arg("history"), py::arg("phi"), py::arg("psi"), py::arg("t_end"),
      py::arg("step") = kDefaultStep);

  m.def(
      "solve_chain_oracle",
      [](const ModelParams& params, const HistoryData& hist, const KernelDensity& phi, const KernelDensity& psi,
         double t_end, double step) {
        py::gil_scoped_release release;
        return std::make_shared<Trajectory>(solve_chain_oracle(params, hist, phi, psi, t_end, step));
      },
      py::arg("params"), py::arg("history"), py::arg("phi"), py::arg("psi"), py::arg("t_end"),
      py::arg("step") = kDefaultStep);

  m.def(
      "sup_norm_error",
      [](const Trajectory& a, const Trajectory& b, double t0, double t1, double grid_step) {
        return errors_to_list(sup_norm_error(a, b, t0, t1, grid_step));
      },
      py::arg("a"), py::arg("b"), py::arg("t0"), py::arg("t1"), py::arg("grid_step") = kDefaultErrorGrid);

  m.def("observed_order", [](const std::vector<double>& n, const std::vector<double>& err) {
    return observed_order(n, err);
  }, py::arg("n"), py::arg("error"));

  py::class_<SweepEntry>(m, "SweepEntry")
      .def_property_readonly("n_tau", [](const SweepEntry& e) { return e.pair.n_tau; })
      .def_property_readonly("n_rho", [](const SweepEntry& e) { return e.pair.n_rho; })
      .def_property_readonly("sup_err", [](const SweepEntry& e) { return errors_to_list(e.sup_err); })
      .def_property_readonly("rel_sup_err", [](const SweepEntry& e) { return errors_to_list(e.rel_sup_err); })
      .def_readonly("wall_seconds", &SweepEntry::wall_seconds)
      .def_readonly("failure", &SweepEntry::failure)
      .def("ok", &SweepEntry::ok);

  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("entries", &ConvergenceReport::entries)
      .def_property_readonly("reference_seconds", [](const ConvergenceReport& r) { return r.reference.wall_seconds; });

  // baseline experiment with the overridable knobs a sweep usually varies.
  m.def(
      "convergence_sweep",
      [](const std::vector<std::pair<std::size_t, std::size_t>>& pairs, double t_end, double step,
         ReferenceKind reference, NodeRule rule, unsigned threads) {
        ExperimentSetup setup;
        setup.t_end = t_end;
        setup.step = step;
        setup.reference = reference;
        setup.node_rule = rule;
        setup.threads = threads;
        std::vector<LagPair> lag_pairs;
        for (const auto& [n_tau, n_rho] : pairs) lag_pairs.push_back({n_tau, n_rho});
        py::gil_scoped_release release;
        return convergence_sweep(setup, lag_pairs);
      },
      py::arg("pairs"), py::arg("t_end") = 365.0, py::arg("step") = kDefaultStep,
      py::arg("reference") = ReferenceKind::ChainOracle, py::arg("rule") = NodeRule::Midpoint,
      py::arg("threads") = 0u);
}
