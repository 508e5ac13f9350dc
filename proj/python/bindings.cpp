#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "henon/analysis.hpp"
#include "henon/cli.hpp"
#include "henon/error.hpp"
#include "henon/perturbed.hpp"
#include "henon/radial.hpp"
#include "henon/spectrum.hpp"

namespace py = pybind11;
using namespace henon;

namespace {

SweepOptions sweep_options(std::size_t workers) {
  SweepOptions o;
  o.workers = workers;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hénon equation solvers";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<DegenerateExponent>(m, "DegenerateExponent", error.ptr());
  py::register_exception<NoConvergence>(m, "NoConvergence", error.ptr());

  py::class_<ProblemParams>(m, "ProblemParams")
      .def(py::init([](int N, double alpha, double p) { return ProblemParams{N, alpha, p}; }), py::arg("N"),
           py::arg("alpha"), py::arg("p"))
      .def_readwrite("N", &ProblemParams::N)
      .def_readwrite("alpha", &ProblemParams::alpha)
      .def_readwrite("p", &ProblemParams::p)
      .def("__repr__", [](const ProblemParams& p) {
        std::ostringstream s;
        s << "ProblemParams(N=" << p.N << ", alpha=" << p.alpha << ", p=" << p.p << ")";
        return s.str();
      });

  py::class_<RadialProfile>(m, "RadialProfile")
      .def_readonly("r", &RadialProfile::grid)
      .def_readonly("u", &RadialProfile::values)
      .def_readonly("du", &RadialProfile::dvalues)
      .def_readonly("dimension", &RadialProfile::dimension)
      .def_readonly("alpha", &RadialProfile::weight_alpha)
      .def_readonly("p", &RadialProfile::p)
      .def_readonly("central_value", &RadialProfile::central_value)
      .def_readonly("R0", &RadialProfile::first_zero_R0)
      .def("value", &RadialProfile::value, py::arg("r"))
      .def("slope", &RadialProfile::slope, py::arg("r"))
      .def("__len__", &RadialProfile::size);

  m.def("critical_exponent", py::overload_cast<int, double>(&critical_exponent), py::arg("N"), py::arg("alpha"));
  m.def("fractional_dimension", py::overload_cast<double, double>(&fractional_dimension), py::arg("N"),
        py::arg("alpha"));
  m.def("kelvin_beta", &kelvin_beta, py::arg("params"));
  m.def("alpha_for_fast_decay", &alpha_for_fast_decay, py::arg("N"), py::arg("p"));

  m.def(
      "solve_radial",
      [](const ProblemParams& params, std::size_t nodes) {
        RadialOptions o;
        o.grid_nodes = nodes;
        return solve_henon_radial(params, o);
      },
      py::arg("params"), py::arg("nodes") = 2001, "Positive radial solution on the unit ball.");
  m.def("radial_residual_sup", &radial_residual_sup, py::arg("profile"), py::arg("r_lo") = 0.01,
        py::arg("r_hi") = 0.99);
  m.def(
      "mode_boundary_value", [](const RadialProfile& v, std::size_t k) { return mode_shoot(v, k).boundary_value; },
      py::arg("profile"), py::arg("k"), "a_k(1) / max |a_k| for the mode-k linearized shot.");

  py::class_<SpectralSample>(m, "SpectralSample")
      .def_readonly("p", &SpectralSample::p)
      .def_readonly("nu", &SpectralSample::nu)
      .def_readonly("nu_direct", &SpectralSample::nu_direct)
      .def_readonly("second", &SpectralSample::second)
      .def_readonly("gap", &SpectralSample::gap)
      .def_readonly("ok", &SpectralSample::ok)
      .def_readonly("error", &SpectralSample::error);
  m.def(
      "spectral_sample", [](int N, double alpha, double p) { return spectral_sample(N, alpha, p); }, py::arg("N"),
      py::arg("alpha"), py::arg("p"));
  m.def(
      "sweep_nu",
      [](int N, double alpha, const std::vector<double>& ps, std::size_t workers) {
        py::gil_scoped_release release;
        return sweep_nu(N, alpha, ps, sweep_options(workers)).samples;
      },
      py::arg("N"), py::arg("alpha"), py::arg("ps"), py::arg("workers") = 1);

  py::class_<DegeneracyEntry>(m, "DegeneracyEntry")
      .def_readonly("k", &DegeneracyEntry::k)
      .def_readonly("lambda_k", &DegeneracyEntry::lambda_k)
      .def_readonly("p_k", &DegeneracyEntry::p_k)
      .def_readonly("bracket_lo", &DegeneracyEntry::bracket_lo)
      .def_readonly("bracket_hi", &DegeneracyEntry::bracket_hi)
      .def_readonly("mode_shot_residual", &DegeneracyEntry::mode_shot_residual);
  m.def(
      "find_pk",
      [](int N, double alpha, const std::vector<double>& ps, std::size_t k_max, std::size_t workers) {
        py::gil_scoped_release release;
        const SweepOptions o = sweep_options(workers);
        return find_pk(sweep_nu(N, alpha, ps, o), k_max, o).entries;
      },
      py::arg("N"), py::arg("alpha"), py::arg("ps"), py::arg("k_max") = 8, py::arg("workers") = 1,
      "Degenerate exponents p_k bracketed on the grid ps.");

  py::class_<ContractionReport>(m, "ContractionReport")
      .def_readonly("increments", &ContractionReport::increments)
      .def_readonly("kappa", &ContractionReport::kappa)
      .def_readonly("iterations", &ContractionReport::iterations)
      .def_readonly("residual_sup", &ContractionReport::residual_sup)
      .def_readonly("positivity_margin", &ContractionReport::positivity_margin)
      .def_readonly("phi_sup", &ContractionReport::phi_sup)
      .def_readonly("converged", &ContractionReport::converged);
  m.def(
      "perturbed_solve",
      [](const ProblemParams& params, const std::string& map, double t, std::size_t kmax, std::size_t rnodes) {
        PerturbedOptions o;
        o.kmax = kmax;
        o.rnodes = rnodes;
        const DomainMapSpec spec = parse_map_family(map, t);
        py::gil_scoped_release release;
        return contraction_solve(params, spec, o).report;
      },
      py::arg("params"), py::arg("map") = "bump(0.5,0,0.5)", py::arg("t") = 1e-3, py::arg("kmax") = 32,
      py::arg("rnodes") = 1024, "Contraction solve on the perturbed ball; returns the report.");

  py::class_<PohozaevReport>(m, "PohozaevReport")
      .def_readonly("coefficient", &PohozaevReport::coefficient)
      .def_readonly("volume_term", &PohozaevReport::volume_term)
      .def_readonly("boundary_term", &PohozaevReport::boundary_term)
      .def_readonly("residual", &PohozaevReport::residual)
      .def_readonly("relative_residual", &PohozaevReport::relative_residual);
  m.def(
      "pohozaev_residual",
      [](const ProblemParams& params) { return pohozaev_residual(solve_henon_radial(params), params); },
      py::arg("params"));

  py::class_<FastDecayReport>(m, "FastDecayReport")
      .def_readonly("params", &FastDecayReport::params)
      .def_readonly("beta", &FastDecayReport::beta)
      .def_readonly("interior_residual", &FastDecayReport::interior_residual)
      .def_property_readonly("exterior_residual", [](const FastDecayReport& r) { return r.exterior.residual_sup; })
      .def_property_readonly("decay_exponent", [](const FastDecayReport& r) { return r.exterior.decay_exponent; });
  m.def(
      "fast_decay_pipeline", [](int N, double p) { return fast_decay_pipeline(N, p); }, py::arg("N"), py::arg("p"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line front end; returns (exit_code, stdout, stderr).");
}
