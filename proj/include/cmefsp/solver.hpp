#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cmefsp/generator.hpp"
#include "cmefsp/krylov.hpp"
#include "cmefsp/network.hpp"
#include "cmefsp/statespace.hpp"

namespace cmefsp {

enum class PruneStrategy { Quantile, PruneToMass, FixedThreshold, None };

struct SolverConfig {
  double t0 = 0.0;
  double t_final = 1.0;
  double dt = 0.1;
  /// Strategy parameter: prune fraction for Quantile, mass target for
  /// PruneToMass, weight cutoff for FixedThreshold.
  double alpha = 0.0;
  double eps_time = 1e-8;
  double eps_global = 1e-3;
  int expansion_depth = 1;
  int prune_every = 1;
  BoundaryMode boundary = BoundaryMode::Closed;
  PruneStrategy strategy = PruneStrategy::Quantile;
  std::size_t max_states = 200000;
  /// Record a distribution snapshot every this many steps (0 = disabled;
  /// the initial and final distributions are always included when enabled).
  std::size_t snapshot_every = 0;
  std::uint64_t seed = 0;  // recorded for provenance; the solver is deterministic
  PruneOptions prune;      // tie handling + safety cap
  int max_krylov_dim = 64;
};

struct BudgetDecision {
  std::size_t n_steps = 0;
  double bound = 0.0;       // n_steps * (2 alpha + eps_time)
  double eps_global = 0.0;
  double slack = 0.0;       // eps_global - bound
  bool pass = false;
  bool allocation_ok = false;  // eps_time <= 2 alpha
};

struct StepRecord {
  double t = 0.0;  // time at the end of the step
  std::size_t n_states_before = 0;
  std::size_t n_states_after = 0;
  double pruned_mass = 0.0;
  double local_bound = 0.0;  // 2 * pruned_mass
  double expmv_error = 0.0;  // accumulated l1 estimate for this step
  double cum_bound = 0.0;    // running sum of (local_bound + expmv_error)
};

struct Snapshot {
  double t = 0.0;
  std::vector<State> states;
  std::vector<double> probs;
};

struct SolveResult {
  StateSpace space{0};
  ProbabilityVector p;
  std::vector<StepRecord> steps;
  std::vector<Snapshot> snapshots;
  double wall_seconds = 0.0;
  BudgetDecision budget;
  bool budget_overridden = false;
  /// Standard-FSP runs only: 1 - sum(p), the absorbing-mode diagnostic.
  double leaked_mass = 0.0;
  /// Standard-FSP runs only: outer expansion passes used.
  std::size_t fsp_passes = 0;
};

enum class FailureKind { Capacity, Numerical };

/// Raised by solve_adaptive when a step fails mid-run; carries the per-step
/// records accumulated so far so callers can flush a partial trace.
class SolveFailure : public Error {
 public:
  SolveFailure(FailureKind kind, const std::string& what, std::vector<StepRecord> partial)
      : Error(what), kind_(kind), partial_(std::move(partial)) {}

  FailureKind kind() const { return kind_; }
  const std::vector<StepRecord>& partial_trace() const { return partial_; }

 private:
  FailureKind kind_;
  std::vector<StepRecord> partial_;
};

/// Checks the a-priori budget: with N = ceil((t_final - t0)/dt), requires
/// N * (2 alpha + eps_time) <= eps_global; also reports whether the
/// allocation rule eps_time <= 2 alpha holds.
BudgetDecision verify_budget(const SolverConfig& config);

/// Adaptive FSP: expand -> update generator -> evolve -> prune ->
/// renormalize, with per-step error records. Refuses to run when the budget
/// check fails unless override_budget is set (the override is recorded).
SolveResult solve_adaptive(const ReactionNetwork& network, const State& x0,
                           const SolverConfig& config, bool override_budget = false);

struct StandardFspOptions {
  int expansion_depth = 1;            // reachability steps added per pass
  std::size_t max_states = 200000;
  std::size_t max_passes = 10000;
  double expmv_tolerance = 0.0;       // 0 = min(1e-10, eps/10)
  int max_krylov_dim = 64;
};

/// Classical FSP baseline (absorbing boundary): repeatedly expand and
/// recompute exp(A tf) p0 until the leaked mass 1 - sum(p) drops to eps.
/// The returned vector is substochastic; leaked_mass carries the diagnostic.
SolveResult solve_standard_fsp(const ReactionNetwork& network, const State& x0,
                               double t_final, double eps,
                               const StandardFspOptions& opts = {});

/// The l1 error bound induced by one prune: exactly 2m.
double local_error_bound(const PruneReport& report);

const char* to_string(PruneStrategy s);
const char* to_string(BoundaryMode m);

}  // namespace cmefsp
