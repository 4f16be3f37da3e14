#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmefsp/bench.hpp"
#include "cmefsp/config.hpp"
#include "cmefsp/krylov.hpp"
#include "cmefsp/solver.hpp"
#include "cmefsp/ssa.hpp"

namespace py = pybind11;
using namespace cmefsp;

PYBIND11_MODULE(_cmefsp, m) {
  m.doc() = "Adaptive finite state projection solver for the chemical master equation";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<BudgetRefusedError>(m, "BudgetRefusedError");
  py::register_exception<CapacityError>(m, "CapacityError");

  py::enum_<BoundaryMode>(m, "BoundaryMode")
      .value("closed", BoundaryMode::Closed)
      .value("absorbing", BoundaryMode::Absorbing);

  py::enum_<PruneStrategy>(m, "PruneStrategy")
      .value("quantile", PruneStrategy::Quantile)
      .value("prune_to_mass", PruneStrategy::PruneToMass)
      .value("fixed_threshold", PruneStrategy::FixedThreshold)
      .value("none", PruneStrategy::None);

  py::class_<ReactionNetwork>(m, "ReactionNetwork")
      .def_property_readonly("n_species", &ReactionNetwork::n_species)
      .def_property_readonly("n_reactions", &ReactionNetwork::n_reactions)
      .def_property_readonly("species_names",
                             [](const ReactionNetwork& n) {
                               std::vector<std::string> names;
                               for (const auto& s : n.species()) names.push_back(s.name);
                               return names;
                             })
      .def("propensity", &ReactionNetwork::propensity, py::arg("reaction"), py::arg("state"))
      .def("change_vector", &ReactionNetwork::change_vector, py::arg("reaction"));

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("t0", &SolverConfig::t0)
      .def_readwrite("t_final", &SolverConfig::t_final)
      .def_readwrite("dt", &SolverConfig::dt)
      .def_readwrite("alpha", &SolverConfig::alpha)
      .def_readwrite("eps_time", &SolverConfig::eps_time)
      .def_readwrite("eps_global", &SolverConfig::eps_global)
      .def_readwrite("expansion_depth", &SolverConfig::expansion_depth)
      .def_readwrite("prune_every", &SolverConfig::prune_every)
      .def_readwrite("boundary", &SolverConfig::boundary)
      .def_readwrite("strategy", &SolverConfig::strategy)
      .def_readwrite("max_states", &SolverConfig::max_states)
      .def_readwrite("snapshot_every", &SolverConfig::snapshot_every)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("max_krylov_dim", &SolverConfig::max_krylov_dim);

  py::class_<BudgetDecision>(m, "BudgetDecision")
      .def_readonly("n_steps", &BudgetDecision::n_steps)
      .def_readonly("bound", &BudgetDecision::bound)
      .def_readonly("eps_global", &BudgetDecision::eps_global)
      .def_readonly("slack", &BudgetDecision::slack)
      .def_readonly("pass_", &BudgetDecision::pass)
      .def_readonly("allocation_ok", &BudgetDecision::allocation_ok)
      .def("__bool__", [](const BudgetDecision& d) { return d.pass; });

  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("t", &StepRecord::t)
      .def_readonly("n_states_before", &StepRecord::n_states_before)
      .def_readonly("n_states_after", &StepRecord::n_states_after)
      .def_readonly("pruned_mass", &StepRecord::pruned_mass)
      .def_readonly("local_bound", &StepRecord::local_bound)
      .def_readonly("expmv_error", &StepRecord::expmv_error)
      .def_readonly("cum_bound", &StepRecord::cum_bound);

  py::class_<Snapshot>(m, "Snapshot")
      .def_readonly("t", &Snapshot::t)
      .def_readonly("states", &Snapshot::states)
      .def_readonly("probs", &Snapshot::probs);

  py::class_<SolveResult>(m, "SolveResult")
      .def_property_readonly("states",
                             [](const SolveResult& r) { return r.space.states(); })
      .def_property_readonly("probs",
                             [](const SolveResult& r) {
                               return std::vector<double>(r.p.weights().begin(),
                                                          r.p.weights().end());
                             })
      .def_readonly("steps", &SolveResult::steps)
      .def_readonly("snapshots", &SolveResult::snapshots)
      .def_readonly("wall_seconds", &SolveResult::wall_seconds)
      .def_readonly("budget", &SolveResult::budget)
      .def_readonly("budget_overridden", &SolveResult::budget_overridden)
      .def_readonly("leaked_mass", &SolveResult::leaked_mass)
      .def_readonly("fsp_passes", &SolveResult::fsp_passes);

  py::class_<ToggleParams>(m, "ToggleParams")
      .def(py::init<>())
      .def_readwrite("eta", &ToggleParams::eta)
      .def_readwrite("alpha1", &ToggleParams::alpha1)
      .def_readwrite("beta1", &ToggleParams::beta1)
      .def_readwrite("k1", &ToggleParams::k1)
      .def_readwrite("alpha2", &ToggleParams::alpha2)
      .def_readwrite("beta2", &ToggleParams::beta2)
      .def_readwrite("k2", &ToggleParams::k2)
      .def_readwrite("d1", &ToggleParams::d1)
      .def_readwrite("d2", &ToggleParams::d2)
      .def_readwrite("gamma", &ToggleParams::gamma)
      .def_readwrite("s", &ToggleParams::s)
      .def_readwrite("constant_rate_degradation_u",
                     &ToggleParams::constant_rate_degradation_u);

  py::class_<BenchmarkModel>(m, "BenchmarkModel")
      .def_readonly("name", &BenchmarkModel::name)
      .def_readonly("description", &BenchmarkModel::description)
      .def_readonly("network", &BenchmarkModel::network)
      .def_readonly("x0", &BenchmarkModel::x0)
      .def_readonly("config", &BenchmarkModel::config);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("t_final", &Trajectory::t_final)
      .def("state_at", &Trajectory::state_at, py::arg("t"))
      .def_property_readonly("n_events", &Trajectory::n_events);

  py::class_<EnsembleStats>(m, "EnsembleStats")
      .def_readonly("grid", &EnsembleStats::grid)
      .def_readonly("mean", &EnsembleStats::mean)
      .def_readonly("variance", &EnsembleStats::variance)
      .def_readonly("sem", &EnsembleStats::sem)
      .def_readonly("n", &EnsembleStats::n);

  py::class_<RunConfig>(m, "RunConfig")
      .def_readonly("network", &RunConfig::network)
      .def_readonly("x0", &RunConfig::x0)
      .def_readwrite("solver", &RunConfig::solver)
      .def_readwrite("override_budget", &RunConfig::override_budget);

  m.def("lotka_volterra", &lotka_volterra, py::arg("a") = 0.1, py::arg("b") = 0.005,
        py::arg("c") = 0.6);
  m.def("michaelis_menten", &michaelis_menten, py::arg("k1") = 0.01, py::arg("km1") = 0.1,
        py::arg("k2") = 0.1);
  m.def("toggle_switch", &toggle_switch, py::arg("params") = ToggleParams{});
  m.def("birth_death", &birth_death, py::arg("lam"), py::arg("mu"), py::arg("cap") = 0);
  m.def("builtin_model", &builtin_model, py::arg("name"), py::arg("params_json") = "{}");

  m.def("verify_budget", &verify_budget, py::arg("config"));
  m.def("solve_adaptive", &solve_adaptive, py::arg("network"), py::arg("x0"),
        py::arg("config"), py::arg("override_budget") = false);
  m.def(
      "solve_standard_fsp",
      [](const ReactionNetwork& network, const State& x0, double t_final, double eps) {
        return solve_standard_fsp(network, x0, t_final, eps);
      },
      py::arg("network"), py::arg("x0"), py::arg("t_final"), py::arg("eps"));

  m.def("ssa_trajectory", &ssa_trajectory, py::arg("network"), py::arg("x0"),
        py::arg("t_final"), py::arg("seed"), py::arg("stream") = 0);
  m.def(
      "ensemble_stats",
      [](const ReactionNetwork& network, const State& x0, double t_final,
         const std::vector<double>& grid, std::size_t n, std::uint64_t base_seed) {
        return ensemble_stats(network, x0, t_final, grid, n, base_seed);
      },
      py::arg("network"), py::arg("x0"), py::arg("t_final"), py::arg("grid"), py::arg("n"),
      py::arg("base_seed"));
  m.def("fsp_mean", &fsp_mean, py::arg("result"), py::arg("species"));

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("config_to_json", &to_json, py::arg("config"));
  m.def("export_model_config", &export_model_config, py::arg("model"));
  m.def("run", &run, py::arg("config"));
}
