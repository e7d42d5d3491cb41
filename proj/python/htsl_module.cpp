#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "htsl/ensemble.hpp"
#include "htsl/errors.hpp"
#include "htsl/growth.hpp"
#include "htsl/processes.hpp"
#include "htsl/slln.hpp"
#include "htsl/stable.hpp"
#include "htsl/stats.hpp"
#include "htsl/verify.hpp"

namespace py = pybind11;
using namespace htsl;

namespace {

py::array_t<double> ensemble_to_array(const PathEnsemble& e) {
  py::array_t<double> out({e.paths, e.points});
  std::copy(e.data.begin(), e.data.end(), out.mutable_data());
  return out;
}

PathEnsemble array_to_ensemble(const py::array_t<double, py::array::c_style |
                                                             py::array::forcecast>& a,
                               double grid_step, const std::string& meta_json) {
  if (a.ndim() != 2) {
    throw std::invalid_argument("expected a 2-d array (paths x points)");
  }
  PathEnsemble e = PathEnsemble::allocate(
      static_cast<std::size_t>(a.shape(0)),
      static_cast<std::size_t>(a.shape(1)), grid_step);
  std::copy(a.data(), a.data() + a.size(), e.data.begin());
  if (!meta_json.empty()) {
    e.meta = nlohmann::json::parse(meta_json);
  }
  return e;
}

py::dict ensemble_result(const PathEnsemble& e) {
  py::dict d;
  d["data"] = ensemble_to_array(e);
  d["grid_step"] = e.grid_step;
  d["meta"] = e.meta.dump();
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "phi-normalized SLLN simulation and verification core";

  py::register_exception<guard_error>(m, "GuardError", PyExc_ArithmeticError);

  py::class_<GrowthFunction>(m, "GrowthFunction")
      .def_static("power", &GrowthFunction::power, py::arg("q"),
                  py::arg("x0") = 1.0)
      .def_static("power_log", &GrowthFunction::power_log, py::arg("q"),
                  py::arg("beta"), py::arg("x0") = -1.0)
      .def_static("iterated_log", &GrowthFunction::iterated_log,
                  py::arg("eps"), py::arg("x0") = 3.2)
      .def("__call__",
           [](const GrowthFunction& f, double x) { return f(x); })
      .def_property_readonly("x0", &GrowthFunction::x0)
      .def("to_json", [](const GrowthFunction& f) { return f.to_json().dump(); });

  m.def(
      "doubling_bounds",
      [](const GrowthFunction& phi, double x_max) {
        const auto b = doubling_bounds(phi, x_max);
        return py::make_tuple(b.c1, b.c2);
      },
      py::arg("phi"), py::arg("x_max"));
  m.def("contraction_constant", &contraction_constant, py::arg("p"),
        py::arg("c1"), py::arg("a"));
  m.def(
      "block_base",
      [](double p, double c1) {
        const auto b = block_base(p, c1);
        return py::make_tuple(b.a, b.c);
      },
      py::arg("p"), py::arg("c1"));

  m.def(
      "sample_stable",
      [](double alpha, double skew, double scale, double shift, std::size_t n,
         std::uint64_t seed, std::uint64_t stream) {
        const auto v = sample_stable(StableLaw(alpha, skew, scale, shift),
                                     SeedStream{seed, stream}, n);
        py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
        std::copy(v.begin(), v.end(), out.mutable_data());
        return out;
      },
      py::arg("alpha"), py::arg("skew") = 0.0, py::arg("scale") = 1.0,
      py::arg("shift") = 0.0, py::arg("n") = 1, py::arg("seed") = 0,
      py::arg("stream") = 0);

  m.def(
      "simulate_iid",
      [](double alpha, double skew, std::size_t n, std::size_t paths,
         std::uint64_t seed) {
        return ensemble_result(
            simulate_iid(StableLaw(alpha, skew), n, paths, seed));
      },
      py::arg("alpha"), py::arg("skew"), py::arg("n"), py::arg("paths"),
      py::arg("seed"));

  m.def(
      "simulate_quasi_stationary",
      [](const std::vector<double>& coeffs, std::size_t n, std::size_t paths,
         std::uint64_t seed) {
        const auto r = simulate_quasi_stationary(
            QuasiStationarySpec::finite(coeffs), n, paths, seed);
        py::dict d = ensemble_result(r.ensemble);
        d["f_table"] = r.f_table;
        return d;
      },
      py::arg("coeffs"), py::arg("n"), py::arg("paths"), py::arg("seed"));

  m.def(
      "simulate_stable_levy",
      [](double alpha, std::size_t n, double grid_step, std::size_t paths,
         std::uint64_t seed, double skew) {
        return ensemble_result(
            simulate_stable_levy(alpha, n, grid_step, paths, seed, skew));
      },
      py::arg("alpha"), py::arg("n"), py::arg("grid_step") = 1.0,
      py::arg("paths") = 1, py::arg("seed") = 0, py::arg("skew") = 0.0);

  m.def(
      "simulate_lfsm",
      [](double alpha, double hurst, std::size_t n, std::size_t paths,
         std::uint64_t seed, std::uint64_t mesh, double cutoff) {
        return ensemble_result(
            simulate_lfsm(LfsmSpec(alpha, hurst, mesh, cutoff), n, paths, seed));
      },
      py::arg("alpha"), py::arg("hurst"), py::arg("n"), py::arg("paths") = 1,
      py::arg("seed") = 0, py::arg("mesh") = 16, py::arg("cutoff") = 0.0);

  m.def(
      "partial_sum",
      [](const std::vector<double>& xi, std::size_t m, std::size_t n) {
        return partial_sum(std::span<const double>(xi), m, n);
      },
      py::arg("xi"), py::arg("m"), py::arg("n"));
  m.def(
      "running_max",
      [](const std::vector<double>& xi, std::size_t m, std::size_t n) {
        return running_max(std::span<const double>(xi), m, n);
      },
      py::arg("xi"), py::arg("m"), py::arg("n"));

  m.def(
      "moment_series",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             data,
         double p, const GrowthFunction& phi, std::uint64_t a,
         std::size_t levels, std::size_t k_window, const std::string& meta) {
        const PathEnsemble e = array_to_ensemble(data, 1.0, meta);
        return moment_series(e, p, phi, a, levels, k_window).to_json().dump();
      },
      py::arg("increments"), py::arg("p"), py::arg("phi"), py::arg("a"),
      py::arg("levels"), py::arg("k_window") = 0, py::arg("meta") = "");

  m.def(
      "decay_diagnostic",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             data,
         const GrowthFunction& phi, std::uint64_t a, std::size_t levels) {
        const PathEnsemble e = array_to_ensemble(data, 1.0, "");
        return decay_diagnostic(e, phi, a, levels).to_json().dump();
      },
      py::arg("increments"), py::arg("phi"), py::arg("a"), py::arg("levels"));

  m.def(
      "tail_exponent",
      [](std::vector<double> sups) {
        const TailFit f = tail_exponent(std::move(sups));
        return py::make_tuple(f.slope, f.stderr_, f.r2, f.points);
      },
      py::arg("sup_samples"));

  m.def(
      "recursion_certificate",
      [](std::vector<double> terms, double c, double f0) {
        const auto r = recursion_certificate(std::move(terms), c, f0);
        py::dict d;
        d["f_bounds"] = r.f_bounds;
        d["limit_bound"] = r.limit_bound;
        d["summed_bound"] = r.summed_bound;
        d["floored_negative_terms"] = r.floored_negative_terms;
        return d;
      },
      py::arg("terms"), py::arg("c"), py::arg("f0") = 0.0);

  m.def(
      "sssi_moment_identity",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             values,
         double hurst, double p, std::uint64_t a, std::size_t levels) {
        const PathEnsemble e = array_to_ensemble(values, 1.0, "");
        const auto r = sssi_moment_identity(e, hurst, p, a, levels);
        py::dict d;
        d["ratios"] = r.ratios;
        d["flags"] = r.flags;
        return d;
      },
      py::arg("values"), py::arg("hurst"), py::arg("p"), py::arg("a"),
      py::arg("levels"));

  m.def("quantile", &quantile, py::arg("sample"), py::arg("q"));
  m.def("anderson_darling_2sample", &anderson_darling_2sample, py::arg("a"),
        py::arg("b"));
}
