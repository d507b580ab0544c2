#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fsmacwt/allocation.hpp"
#include "fsmacwt/errors.hpp"
#include "fsmacwt/experiment.hpp"
#include "fsmacwt/gaussian_bounds.hpp"
#include "fsmacwt/markov_state.hpp"
#include "fsmacwt/region_geometry.hpp"

namespace py = pybind11;
using namespace fsmacwt;

namespace {

MarkovChain chain_from_columns(const std::vector<std::vector<double>>& columns, std::vector<std::string> labels) {
  const auto k = static_cast<Eigen::Index>(columns.size());
  Matrix m(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (static_cast<Eigen::Index>(columns[j].size()) != k) throw ShapeError("columns must form a square matrix");
    for (Eigen::Index l = 0; l < k; ++l) m(l, j) = columns[j][l];
  }
  if (labels.empty())
    for (Eigen::Index i = 0; i < k; ++i) labels.push_back(std::to_string(i));
  return MarkovChain(std::move(labels), m);
}

py::dict report_dict(const ValidateReport& rep) {
  py::list rows;
  for (const auto& r : rep.rows) {
    py::dict d;
    d["term"] = r.term;
    d["analytic"] = r.analytic;
    d["empirical"] = r.empirical;
    d["abs_error"] = r.abs_error;
    d["pass"] = r.pass;
    rows.append(d);
  }
  py::dict out;
  out["seed"] = rep.seed;
  out["samples"] = rep.samples;
  out["tolerance"] = rep.tolerance;
  out["rows"] = rows;
  out["warnings"] = rep.warnings;
  out["all_pass"] = rep.all_pass();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bounds for the finite-state multiple-access wiretap channel with delayed feedback";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<StructuralError>(m, "StructuralError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<OrderingError>(m, "OrderingError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  py::register_exception<CardinalityError>(m, "CardinalityError", base.ptr());
  py::register_exception<GuardError>(m, "GuardError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());

  py::class_<MarkovChain>(m, "MarkovChain")
      .def(py::init(&chain_from_columns), py::arg("columns"), py::arg("labels") = std::vector<std::string>{},
           "columns[j][l] = Pr{to l | from j}")
      .def_property_readonly("labels", &MarkovChain::labels)
      .def("__len__", &MarkovChain::size);

  m.def("gilbert_elliott", &build_gilbert_elliott, py::arg("g"), py::arg("b"));
  m.def(
      "steady_state",
      [](const MarkovChain& c) {
        const auto pi = steady_state(c).pi;
        return std::vector<double>(pi.data(), pi.data() + pi.size());
      },
      py::arg("chain"));
  m.def(
      "joint_delayed_pmf",
      [](const MarkovChain& c, std::int64_t d1, std::int64_t d2) { return joint_delayed_pmf(c, d1, d2).pmf; },
      py::arg("chain"), py::arg("d1"), py::arg("d2"), "Flat pmf indexed (t1 * k + t2) * k + s.");

  py::class_<RegionBounds>(m, "RegionBounds")
      .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"), py::arg("c"))
      .def_readwrite("a", &RegionBounds::a)
      .def_readwrite("b", &RegionBounds::b)
      .def_readwrite("c", &RegionBounds::c)
      .def("__repr__", [](const RegionBounds& r) {
        return "RegionBounds(" + std::to_string(r.a) + ", " + std::to_string(r.b) + ", " + std::to_string(r.c) + ")";
      });

  py::class_<FadingState>(m, "FadingState")
      .def(py::init<double, double, double, double>(), py::arg("h1"), py::arg("h2"), py::arg("h3"),
           py::arg("sigma_s2"))
      .def_readwrite("h1", &FadingState::h1)
      .def_readwrite("h2", &FadingState::h2)
      .def_readwrite("h3", &FadingState::h3)
      .def_readwrite("sigma_s2", &FadingState::sigma_s2);

  py::class_<GaussianFadingChannel>(m, "GaussianFadingChannel")
      .def(py::init([](std::vector<FadingState> states, double sigma_w2) {
             return GaussianFadingChannel{{}, std::move(states), sigma_w2};
           }),
           py::arg("states"), py::arg("sigma_w2"))
      .def_readwrite("states", &GaussianFadingChannel::states)
      .def_readwrite("sigma_w2", &GaussianFadingChannel::sigma_w2);

  m.def(
      "expected_bounds",
      [](const GaussianFadingChannel& ch, const MarkovChain& c, std::int64_t d1, std::int64_t d2, double p1,
         double p2, const std::string& kind) {
        return expected_bounds(ch, c, d1, d2, uniform_allocation({p1, p2}, c), parse_bound_kind(kind));
      },
      py::arg("channel"), py::arg("chain"), py::arg("d1"), py::arg("d2"), py::arg("p1"), py::arg("p2"),
      py::arg("kind"), "Caps under uniform power allocation.");
  m.def(
      "max_sum_rate",
      [](const GaussianFadingChannel& ch, const MarkovChain& c, std::int64_t d1, std::int64_t d2, double p1,
         double p2, const std::string& kind, int grid_levels) {
        OptimizerOptions opts;
        opts.grid_levels = grid_levels;
        return maximize_sum_rate(ch, c, d1, d2, parse_bound_kind(kind), {p1, p2}, opts).value;
      },
      py::arg("channel"), py::arg("chain"), py::arg("d1"), py::arg("d2"), py::arg("p1"), py::arg("p2"),
      py::arg("kind"), py::arg("grid_levels") = 21);

  m.def(
      "union_frontier",
      [](const std::vector<RegionBounds>& regions, bool hull) {
        auto f = union_frontier(regions);
        if (hull) f = convex_hull_frontier(f);
        std::vector<std::pair<double, double>> out;
        for (const auto& p : f.points) out.emplace_back(p.r1, p.r2);
        return out;
      },
      py::arg("regions"), py::arg("hull") = false);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_static("parse", [](const std::string& text) { return parse_config(text); })
      .def_static("load", [](const std::string& path) { return load_config(path); })
      .def("serialize", [](const ExperimentConfig& c) { return serialize_config(c); })
      .def_property(
          "seed", [](const ExperimentConfig& c) { return c.optimizer.seed; },
          [](ExperimentConfig& c, std::uint64_t s) { c.optimizer.seed = s; })
      .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; });

  m.def("run_sweep_delay", &run_sweep_delay, py::arg("config"));
  m.def("run_region", &run_region, py::arg("config"));
  m.def("run_discrete", &run_discrete, py::arg("config"));
  m.def(
      "run_validate", [](const ExperimentConfig& c) { return report_dict(run_validate(c)); }, py::arg("config"));
  m.def("default_validate_config", &default_validate_config);
}
