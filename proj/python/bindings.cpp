#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wallflux/bounds.hpp"
#include "wallflux/errors.hpp"
#include "wallflux/field.hpp"
#include "wallflux/kernels.hpp"
#include "wallflux/montecarlo.hpp"
#include "wallflux/radiative_units.hpp"
#include "wallflux/renewal.hpp"
#include "wallflux/scenario.hpp"
#include "wallflux/spectral.hpp"

namespace py = pybind11;
using namespace wallflux;

namespace {

Kernel kernel_named(const std::string& name) {
  if (name == "gas") return Kernel::gas();
  if (name == "monokinetic") return Kernel::monokinetic();
  throw ValidationError("kernel", "expected 'gas' or 'monokinetic'");
}

bool grey_variant(const InitialDataSpec& s) { return s.variant == "grey_bump" || s.variant == "grey_table"; }

RadialInitialData build(const InitialDataSpec& s) {
  return scenario::build_initial_data(s, grey_variant(s) ? ProblemKind::Radiative : ProblemKind::Gas);
}

RenewalSolution solve_spec(const InitialDataSpec& spec, double horizon, double dt) {
  const auto data = build(spec);
  SolveOptions so;
  so.source_breakpoints = sources::source_breakpoints(data);
  if (is_gas(data)) so.bound_constant = profile_sup(data);
  return renewal::solve(is_gas(data) ? Kernel::gas() : Kernel::monokinetic(), sources::make_source(data), horizon, dt,
                        so);
}

py::dict fit_dict(const DecayFit& f) {
  py::dict d;
  d["rate"] = f.rate;
  d["intercept"] = f.intercept;
  d["t0"] = f.t0;
  d["t1"] = f.t1;
  d["rms_residual"] = f.rms_residual;
  d["points"] = f.points;
  return d;
}

}  // namespace

PYBIND11_MODULE(_wallflux, m) {
  m.doc() = "Wall flux of free transport in the unit ball";

  static py::exception<Error> base(m, "WallfluxError");
  static py::exception<ValidationError> validation(m, "ValidationError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<InitialDataSpec>(m, "InitialData")
      .def(py::init([](const std::string& variant, py::kwargs kw) {
             InitialDataSpec s;
             s.variant = variant;
             if (grey_variant(s)) s.amplitude = 1.0;
             for (auto item : kw) {
               const auto key = item.first.cast<std::string>();
               if (key == "amplitude") s.amplitude = item.second.cast<double>();
               else if (key == "radius") s.radius = item.second.cast<double>();
               else if (key == "multiple") s.multiple = item.second.cast<double>();
               else if (key == "epsilon") s.epsilon = item.second.cast<double>();
               else if (key == "inner") s.inner = item.second.cast<double>();
               else if (key == "outer") s.outer = item.second.cast<double>();
               else if (key == "table") s.table = item.second.cast<std::string>();
               else throw ValidationError(key, "unknown initial data parameter");
             }
             return s;
           }),
           py::arg("variant") = "bounded_bump")
      .def_readwrite("variant", &InitialDataSpec::variant)
      .def_readwrite("amplitude", &InitialDataSpec::amplitude)
      .def_readwrite("radius", &InitialDataSpec::radius)
      .def_readwrite("multiple", &InitialDataSpec::multiple)
      .def_readwrite("epsilon", &InitialDataSpec::epsilon)
      .def_readwrite("inner", &InitialDataSpec::inner)
      .def_readwrite("outer", &InitialDataSpec::outer)
      .def_readwrite("table", &InitialDataSpec::table)
      .def("total_mass", [](const InitialDataSpec& s) { return total_mass(build(s)); })
      .def("source", [](const InitialDataSpec& s, double t) { return sources::make_source(build(s))(t); });

  m.def("kernel", [](const std::string& k, double tau) { return kernels::eval(kernel_named(k), tau); },
        py::arg("kernel"), py::arg("tau"));
  m.def("kernel_cumulative", [](const std::string& k, double tau) { return kernels::cumulative(kernel_named(k), tau); },
        py::arg("kernel"), py::arg("tau"));
  m.def("kernel_moment", [](const std::string& k, int n) { return kernels::moment(kernel_named(k), n); },
        py::arg("kernel"), py::arg("order"));

  py::class_<RenewalSolution>(m, "RenewalSolution")
      .def_readonly("dt", &RenewalSolution::dt)
      .def_readonly("values", &RenewalSolution::values)
      .def_readonly("source", &RenewalSolution::source)
      .def_readonly("mu_infinity", &RenewalSolution::mu_infinity)
      .def_readonly("mu_infinity_discrete", &RenewalSolution::mu_infinity_discrete)
      .def_readonly("residual_max", &RenewalSolution::residual_max)
      .def_property_readonly("horizon", &RenewalSolution::horizon)
      .def("times", &RenewalSolution::times)
      .def("at", &RenewalSolution::at, py::arg("t"))
      .def("__len__", &RenewalSolution::size);

  m.def("solve", &solve_spec, py::arg("initial_data"), py::arg("horizon"), py::arg("dt"),
        "Renewal solution for the wall flux; the kernel follows the data (gas or grey).");
  m.def(
      "lp_error",
      [](const RenewalSolution& sol, const InitialDataSpec& spec, double t, double p, bool root) {
        field::LpOptions o;
        o.root = root;
        return field::lp_error(sol, build(spec), t, p, o).value;
      },
      py::arg("solution"), py::arg("initial_data"), py::arg("t"), py::arg("p"), py::arg("root") = false);
  m.def("boundary_flux", [](const RenewalSolution& sol, const InitialDataSpec& spec, double t, const Vec3& w) {
    return field::boundary_flux(sol, build(spec), t, w);
  });
  m.def(
      "power_fit",
      [](const std::vector<double>& t, const std::vector<double>& e, double t0, double t1) {
        return fit_dict(field::power_fit(t, e, t0, t1));
      },
      py::arg("times"), py::arg("errors"), py::arg("t0"), py::arg("t1"));

  m.def(
      "spectral_abscissa",
      [](double depth) {
        const auto s = spectral::spectral_abscissa(depth);
        py::dict d;
        d["alpha"] = s.alpha;
        d["zeros"] = s.zeros;
        d["lower_bound_only"] = s.lower_bound_only;
        d["height"] = s.height;
        return d;
      },
      py::arg("strip_depth") = 3.0);
  m.def("abscissa_by_bisection", [](double depth) { return spectral::abscissa_by_bisection(depth); },
        py::arg("strip_depth") = 3.0);
  m.def(
      "count_zeros",
      [](double re_min, double re_max, double im_min, double im_max) {
        return spectral::count_zeros(Rect{re_min, re_max, im_min, im_max});
      },
      py::arg("re_min"), py::arg("re_max"), py::arg("im_min"), py::arg("im_max"));
  m.def(
      "exponential_rate_fit",
      [](const RenewalSolution& sol, double t0, double t1, bool envelope) {
        return fit_dict(spectral::exponential_rate_fit(sol, t0, t1, envelope ? FitMode::Envelope : FitMode::Raw));
      },
      py::arg("solution"), py::arg("t0"), py::arg("t1"), py::arg("envelope") = true);

  m.def(
      "inequality_chain",
      [](double eps, double T, double R, double t) {
        LowerBoundScenario sc{eps, T, R, 2.0};
        sc.validate();
        const auto c = bounds::inequality_chain(sc, t);
        return std::vector<double>(c.begin(), c.end());
      },
      py::arg("epsilon"), py::arg("T"), py::arg("R"), py::arg("t"));
  m.def("entropy_value", &bounds::entropy_value, py::arg("epsilon"));
  m.def("lp_norm_value", &bounds::lp_norm_value, py::arg("epsilon"), py::arg("p"));

  m.def(
      "monte_carlo",
      [](const InitialDataSpec& spec, std::size_t n, std::uint64_t seed, double horizon, double bin_width, int threads) {
        EvolveOptions o;
        o.horizon = horizon;
        o.bin_width = bin_width;
        o.threads = threads;
        FluxTally t;
        {
          py::gil_scoped_release nogil;
          t = montecarlo::evolve(montecarlo::sample_initial(build(spec), n, seed), o);
        }
        py::dict d;
        d["bin_centers"] = t.bin_centers();
        d["flux"] = t.flux;
        d["stderr"] = t.standard_error;
        d["total_weight"] = t.total_weight;
        d["never_hit_mass"] = t.never_hit_mass;
        d["interval_density"] = t.interval_density;
        return d;
      },
      py::arg("initial_data"), py::arg("particles"), py::arg("seed") = 1, py::arg("horizon") = 40.0,
      py::arg("bin_width") = 0.5, py::arg("threads") = 0);

  m.def("planck", [](double nu, double theta, bool si) {
    return radiative::planck(nu, theta, si ? PhysicalConstants::si() : PhysicalConstants::dimensionless());
  }, py::arg("nu"), py::arg("theta"), py::arg("si") = false);
  m.def("stefan_boltzmann", [](bool si) {
    return radiative::stefan_boltzmann(si ? PhysicalConstants::si() : PhysicalConstants::dimensionless());
  }, py::arg("si") = false);
  m.def("temperature_from_flux", [](double f, bool si) {
    return radiative::temperature_from_flux(f, si ? PhysicalConstants::si() : PhysicalConstants::dimensionless());
  }, py::arg("f"), py::arg("si") = false);

  m.def(
      "run_scenario",
      [](const std::filesystem::path& path, std::optional<std::filesystem::path> output_dir) {
        auto c = scenario::load(path);
        if (output_dir) c.output_dir = *output_dir;
        return scenario::run(c).summary.dump();
      },
      py::arg("path"), py::arg("output_dir") = py::none(),
      "Runs a scenario file and returns summary.json as a string.");
}
