#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "tdflow/brinkman.hpp"
#include "tdflow/cli_io.hpp"
#include "tdflow/conv.hpp"
#include "tdflow/energy.hpp"
#include "tdflow/error.hpp"
#include "tdflow/optimizer.hpp"
#include "tdflow/problems.hpp"
#include "tdflow/thresholding.hpp"

namespace py = pybind11;
using namespace tdflow;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Mask = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

DomainSpec lattice_for(const py::buffer_info& info, double h) {
  if (info.ndim != 2 || info.shape[0] < 2 || info.shape[1] < 2) {
    throw ArgumentError("expected a 2D array with at least 2 nodes per axis");
  }
  const int ny = int(info.shape[0]) - 1;
  const int nx = int(info.shape[1]) - 1;
  return DomainSpec{{0.0, 0.0}, {nx * h, ny * h}, nx, ny};
}

NodalScalarField to_field(const Array& a, const DomainSpec& grid) {
  std::vector<double> v(a.data(), a.data() + a.size());
  return NodalScalarField(grid, std::move(v));
}

Array to_array(const NodalScalarField& f) {
  Array out({f.rows(), f.cols()});
  std::memcpy(out.mutable_data(), f.values().data(), f.size() * sizeof(double));
  return out;
}

IndicatorField to_indicator(const Mask& m, const DomainSpec& grid) {
  const auto info = m.request();
  if (info.ndim != 2 || info.shape[0] != grid.nodes_y() || info.shape[1] != grid.nodes_x()) {
    throw ArgumentError("indicator shape does not match the grid");
  }
  std::vector<std::uint8_t> v(m.data(), m.data() + m.size());
  for (auto& c : v) c = c ? 1 : 0;
  return IndicatorField(grid, std::move(v));
}

Mask to_mask(const IndicatorField& chi) {
  Mask out({chi.grid().nodes_y(), chi.grid().nodes_x()});
  std::memcpy(out.mutable_data(), chi.chi1_values().data(), chi.size());
  return out;
}

py::dict record_dict(const EnergyRecord& r) {
  py::dict d;
  d["iteration"] = r.iteration;
  d["tau"] = r.tau;
  d["dissipation"] = r.dissipation;
  d["penalty"] = r.penalty;
  d["forcing"] = r.forcing;
  d["perimeter"] = r.perimeter;
  d["total"] = r.total;
  d["flips"] = r.flips;
  return d;
}

py::dict result_dict(const OptimizationResult& r) {
  py::dict d;
  d["chi"] = to_mask(r.chi_final);
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  d["termination_reason"] = std::string(to_string(r.termination_reason));
  d["initial"] = record_dict(r.initial);
  py::list hist;
  for (const auto& rec : r.history) hist.append(record_dict(rec));
  d["history"] = hist;
  d["worst_decay_violation"] = r.worst_decay_violation;
  d["fluid_components"] = connected_components(r.chi_final, true);
  return d;
}

}  // namespace

PYBIND11_MODULE(_tdflow, m) {
  m.doc() = "Threshold-dynamics topology optimization for Stokes flow";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "gaussian_convolve",
      [](const Array& field, double h, double tau, bool periodic) {
        const DomainSpec grid = lattice_for(field.request(), h);
        return to_array(gaussian_convolve(to_field(field, grid), tau,
                                          periodic ? ConvBoundary::periodic : ConvBoundary::mirror));
      },
      py::arg("field"), py::arg("h"), py::arg("tau"), py::arg("periodic") = true,
      "Heat-kernel convolution of a nodal array (rows = y, columns = x) with lattice spacing h.");

  m.def(
      "direct_convolve_oracle",
      [](const Array& field, double h, double tau) {
        const DomainSpec grid = lattice_for(field.request(), h);
        return to_array(direct_convolve_oracle(to_field(field, grid), tau));
      },
      py::arg("field"), py::arg("h"), py::arg("tau"));

  m.def(
      "perimeter_estimate",
      [](const Mask& chi, double h, double tau) {
        const DomainSpec grid = lattice_for(chi.request(), h);
        return perimeter_estimate(to_indicator(chi, grid), tau);
      },
      py::arg("chi"), py::arg("h"), py::arg("tau"));

  m.def(
      "select_smallest",
      [](const std::vector<double>& keys, long count) {
        const Selection s = select_smallest(keys, count);
        return py::make_tuple(std::vector<bool>(s.selected.begin(), s.selected.end()), s.delta);
      },
      py::arg("keys"), py::arg("count"), "Indices with the count smallest keys, and the first excluded key.");

  m.def(
      "select_by_weight",
      [](const std::vector<double>& keys, const std::vector<double>& weights, double target) {
        const Selection s = select_by_weight(keys, weights, target);
        return py::make_tuple(std::vector<bool>(s.selected.begin(), s.selected.end()), s.delta);
      },
      py::arg("keys"), py::arg("weights"), py::arg("target"));

  m.def(
      "adapt_tau",
      [](double tau, double e_chi, double eta, double tau_threshold, double adapt_tolerance) {
        OptimizerConfig c;
        c.tau0 = std::max(tau, tau_threshold);
        c.eta = eta;
        c.tau_threshold = tau_threshold;
        c.adapt_tolerance = adapt_tolerance;
        c.stop_tolerance = 0.0;
        c.validate();
        return adapt_tau(tau, e_chi, c);
      },
      py::arg("tau"), py::arg("e_chi"), py::arg("eta"), py::arg("tau_threshold"), py::arg("adapt_tolerance"));

  m.def("benchmark_names", &benchmark_names);

  m.def(
      "initial_chi",
      [](const std::string& benchmark, int nx, int ny, double beta) {
        const Benchmark b = benchmark_by_name(benchmark);
        DomainSpec grid = b.domain();
        grid.nx = nx;
        grid.ny = ny;
        grid.validate();
        return to_mask(initial_chi(b.initial, grid, beta));
      },
      py::arg("benchmark"), py::arg("nx"), py::arg("ny"), py::arg("beta"));

  m.def(
      "solve_flow",
      [](const std::string& benchmark, const Mask& chi, double tau, int nx, int ny, double alpha_bar) {
        const Benchmark b = benchmark_by_name(benchmark);
        DomainSpec grid = b.domain();
        grid.nx = nx;
        grid.ny = ny;
        grid.validate();
        const IndicatorField ind = to_indicator(chi, grid);
        const BrinkmanProblem problem = make_problem(b, grid, alpha_bar);
        FlowSolution flow;
        EnergyRecord rec;
        {
          py::gil_scoped_release release;
          flow = solve(assemble(problem, build_alpha_field(ind, tau, alpha_bar)));
          rec = evaluate_energy(ind, flow, problem, tau, b.config.gamma);
        }
        py::dict d;
        d["speed_squared"] = to_array(speed_squared_nodal(flow));
        d["pressure"] = to_array(NodalScalarField(grid, flow.pressure));
        d["residual_norm"] = flow.residual_norm;
        d["energy"] = record_dict(rec);
        return d;
      },
      py::arg("benchmark"), py::arg("chi"), py::arg("tau"), py::arg("nx"), py::arg("ny"),
      py::arg("alpha_bar") = 2.5e4,
      "Brinkman solve for a given indicator; returns nodal |u|^2, pressure and the energy terms.");

  m.def(
      "run_config",
      [](const std::string& text, bool write_outputs) {
        const RunConfig config = parse_config(text);
        OptimizationResult result = [&] {
          py::gil_scoped_release release;
          if (!write_outputs) return execute(config);
          OutputWriter writer(config);
          return execute(config, &writer);
        }();
        return result_dict(result);
      },
      py::arg("text"), py::arg("write_outputs") = false,
      "Runs the optimizer on a config given as text, the same format the CLI reads.");
}
