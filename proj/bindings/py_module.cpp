#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "routerq/chart.hpp"
#include "routerq/config.hpp"
#include "routerq/ge.hpp"
#include "routerq/markov.hpp"
#include "routerq/report_io.hpp"
#include "routerq/scenario.hpp"
#include "routerq/version.hpp"

namespace py = pybind11;
using namespace routerq;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tandem GE/GE/c/N router queue simulator";
  m.attr("__version__") = kVersion;

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<GEParams>(m, "GEParams")
      .def(py::init<double, double>(), py::arg("rate"), py::arg("scv") = 1.0)
      .def_readwrite("rate", &GEParams::rate)
      .def_readwrite("scv", &GEParams::scv)
      .def("__repr__", [](const GEParams& p) {
        return "GEParams(rate=" + std::to_string(p.rate) +
               ", scv=" + std::to_string(p.scv) + ")";
      });

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &Rng::uniform);

  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("index"));
  m.def("ge_tau", &ge_tau, py::arg("params"),
        "Mixing probability tau = 2 / (scv + 1).");
  m.def("exp_sample", &exp_sample, py::arg("rate"), py::arg("rng"));
  m.def("ge_sample", &ge_sample, py::arg("params"), py::arg("rng"));
  m.def(
      "ge_samples",
      [](const GEParams& params, std::uint64_t seed, std::size_t n) {
        Rng rng(seed);
        const GESampler sampler(params);
        std::vector<double> out(n);
        for (auto& x : out) x = sampler(rng);
        return out;
      },
      py::arg("params"), py::arg("seed"), py::arg("n"),
      "Seeded batch of GE draws.");

  py::class_<MarkovQueueResult>(m, "MarkovQueueResult")
      .def_readonly("probabilities", &MarkovQueueResult::probabilities)
      .def_readonly("blocking", &MarkovQueueResult::blocking)
      .def_readonly("mean_in_system", &MarkovQueueResult::mean_in_system)
      .def_readonly("throughput", &MarkovQueueResult::throughput)
      .def_readonly("mean_response", &MarkovQueueResult::mean_response);

  m.def("mm1n_solve", &mm1n_solve, py::arg("lambda_"), py::arg("mu"),
        py::arg("capacity"));
  m.def("mmcn_solve", &mmcn_solve, py::arg("lambda_"), py::arg("mu"),
        py::arg("servers"), py::arg("capacity"));
  m.def("erlang_b", &erlang_b, py::arg("servers"), py::arg("offered_load"));
  m.def("littles_residual", &littles_residual, py::arg("l"),
        py::arg("lambda_eff"), py::arg("w"));

  py::enum_<Discipline>(m, "Discipline")
      .value("FCFS", Discipline::FCFS)
      .value("HOL", Discipline::HOL);
  py::enum_<SecurityMode>(m, "SecurityMode")
      .value("OFF", SecurityMode::Off)
      .value("ON", SecurityMode::On);

  py::class_<ArmSpec>(m, "ArmSpec")
      .def(py::init<>())
      .def_readwrite("label", &ArmSpec::label)
      .def_readwrite("discipline", &ArmSpec::discipline)
      .def_readwrite("security", &ArmSpec::security)
      .def_readwrite("servers", &ArmSpec::servers)
      .def_readwrite("scv_a1", &ArmSpec::scv_a1)
      .def_readwrite("scv_a2", &ArmSpec::scv_a2);

  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def(py::init<>())
      .def_readwrite("name", &ScenarioSpec::name)
      .def_readwrite("lambda1_sweep", &ScenarioSpec::lambda1_sweep)
      .def_readwrite("lambda2", &ScenarioSpec::lambda2)
      .def_readwrite("mu", &ScenarioSpec::mu)
      .def_readwrite("scv_s", &ScenarioSpec::scv_s)
      .def_readwrite("capacity", &ScenarioSpec::capacity)
      .def_readwrite("replications", &ScenarioSpec::replications)
      .def_readwrite("arrivals_per_replication",
                     &ScenarioSpec::arrivals_per_replication)
      .def_readwrite("warmup_fraction", &ScenarioSpec::warmup_fraction)
      .def_readwrite("accept_prob", &ScenarioSpec::accept_prob)
      .def_readwrite("acl_rate_factor", &ScenarioSpec::acl_rate_factor)
      .def_readwrite("acl_scv", &ScenarioSpec::acl_scv)
      .def_readwrite("arms", &ScenarioSpec::arms)
      .def("validate", &ScenarioSpec::validate);

  m.def("builtin_scenarios", &builtin_scenarios);
  m.def("builtin_scenario", &builtin_scenario, py::arg("name"));
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("canonical_config", &canonical_config, py::arg("spec"));

  py::class_<MetricCell>(m, "MetricCell")
      .def_readonly("mean", &MetricCell::mean)
      .def_readonly("lo", &MetricCell::lo)
      .def_readonly("hi", &MetricCell::hi);

  py::class_<CsvRow>(m, "CsvRow")
      .def_readonly("scenario", &CsvRow::scenario)
      .def_readonly("arm", &CsvRow::arm)
      .def_readonly("lambda1", &CsvRow::lambda1)
      .def_readonly("klass", &CsvRow::klass)
      .def_readonly("metric", &CsvRow::metric)
      .def_readonly("mean", &CsvRow::mean)
      .def_readonly("lo", &CsvRow::lo)
      .def_readonly("hi", &CsvRow::hi)
      .def_readonly("replications", &CsvRow::replications);

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("scenario", &MetricsReport::scenario)
      .def_readonly("sweep", &MetricsReport::sweep)
      .def_readonly("replications", &MetricsReport::replications)
      .def_readonly("base_seed", &MetricsReport::base_seed)
      .def("rows", &report_rows);

  m.def("run_scenario", &run_scenario, py::arg("spec"), py::arg("base_seed"),
        py::arg("parallelism") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("csv_string", &csv_string, py::arg("report"));
  m.def("emit_csv", &emit_csv, py::arg("report"), py::arg("path"));
  m.def("emit_chart",
        py::overload_cast<const MetricsReport&, const std::string&,
                          const std::string&>(&emit_chart),
        py::arg("report"), py::arg("metric"), py::arg("path"));
}
