#include "cmefsp/solver.hpp"

#include <chrono>
#include <cmath>

namespace cmefsp {

namespace {

void validate_config(const SolverConfig& c) {
  if (!(c.t_final > c.t0)) {
    throw InvalidArgumentError("solver: t_final must exceed t0");
  }
  if (!(c.dt > 0.0)) {
    throw InvalidArgumentError("solver: dt must be positive");
  }
  if (!(c.alpha >= 0.0) || c.alpha >= 1.0) {
    throw InvalidArgumentError("solver: alpha must be in [0, 1)");
  }
  if (!(c.eps_time > 0.0)) {
    throw InvalidArgumentError("solver: eps_time must be positive");
  }
  if (!(c.eps_global > 0.0)) {
    throw InvalidArgumentError("solver: eps_global must be positive");
  }
  if (c.expansion_depth < 1) {
    throw InvalidArgumentError("solver: expansion_depth must be positive");
  }
  if (c.prune_every < 1) {
    throw InvalidArgumentError("solver: prune_every must be positive");
  }
}

std::size_t step_count(double t0, double tf, double dt) {
  // ceil with a fuzz so that e.g. 1.0/0.05 does not round to 21 steps.
  const double span = tf - t0;
  return static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
}

Snapshot take_snapshot(double t, const StateSpace& space, const ProbabilityVector& p) {
  Snapshot s;
  s.t = t;
  s.states = space.states();
  s.probs.assign(p.weights().begin(), p.weights().end());
  return s;
}

}  // namespace

double local_error_bound(const PruneReport& report) { return 2.0 * report.pruned_mass; }

const char* to_string(PruneStrategy s) {
  switch (s) {
    case PruneStrategy::Quantile: return "quantile";
    case PruneStrategy::PruneToMass: return "prune_to_mass";
    case PruneStrategy::FixedThreshold: return "fixed_threshold";
    case PruneStrategy::None: return "none";
  }
  return "?";
}

const char* to_string(BoundaryMode m) {
  return m == BoundaryMode::Closed ? "closed" : "absorbing";
}

BudgetDecision verify_budget(const SolverConfig& config) {
  validate_config(config);
  BudgetDecision d;
  d.n_steps = step_count(config.t0, config.t_final, config.dt);
  d.bound = static_cast<double>(d.n_steps) * (2.0 * config.alpha + config.eps_time);
  d.eps_global = config.eps_global;
  d.slack = config.eps_global - d.bound;
  d.pass = d.bound <= config.eps_global;
  d.allocation_ok = config.eps_time <= 2.0 * config.alpha;
  return d;
}

SolveResult solve_adaptive(const ReactionNetwork& network, const State& x0,
                           const SolverConfig& config, bool override_budget) {
  validate_config(config);
  if (x0.size() != network.n_species()) {
    throw InvalidArgumentError("solve_adaptive: x0 dimension mismatch");
  }
  const BudgetDecision budget = verify_budget(config);
  if (!budget.pass && !override_budget) {
    throw BudgetRefusedError(
        "error budget check failed: N*(2*alpha + eps_time) = " + std::to_string(budget.bound) +
        " > eps_global = " + std::to_string(config.eps_global) +
        " (pass --override-budget to run anyway)");
  }

  const auto wall_start = std::chrono::steady_clock::now();

  SolveResult result;
  result.budget = budget;
  result.budget_overridden = !budget.pass;

  StateSpace space = StateSpace::single(x0);
  ProbabilityVector p = ProbabilityVector::point_mass(space, x0);
  SparseGenerator A = assemble(space, network, config.boundary);

  ExpmvOptions expmv_opts;
  expmv_opts.tolerance = config.eps_time;
  expmv_opts.max_krylov_dim = config.max_krylov_dim;
  expmv_opts.clamp_negatives = (config.boundary == BoundaryMode::Closed);

  const bool snapshots_on = config.snapshot_every > 0;
  if (snapshots_on) result.snapshots.push_back(take_snapshot(config.t0, space, p));

  const std::size_t n_steps = budget.n_steps;
  double t = config.t0;
  double cum_bound = 0.0;

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double dt_k = std::min(config.dt, config.t_final - t);
    StepRecord rec;
    rec.n_states_before = space.size();

    try {
      // 1. Expand one-step-reachable states (depth r) and grow the generator.
      const std::vector<State> added =
          expand(space, network, config.expansion_depth, config.max_states);
      p.extend_for(space);
      if (!added.empty()) {
        A = update_generator(A, space, {}, added, network);
      }

      // 2. Evolve through dt_k.
      auto [w, expmv_report] = expmv(A, p.weights(), dt_k, expmv_opts);
      p = ProbabilityVector(std::move(w), space.generation());
      rec.expmv_error = expmv_report.estimated_error;
    } catch (const CapacityError& e) {
      throw SolveFailure(FailureKind::Capacity, e.what(), std::move(result.steps));
    } catch (const ExpmvFailure& e) {
      throw SolveFailure(FailureKind::Numerical, e.what(), std::move(result.steps));
    }

    // 3. Prune on the configured cadence, then renormalize.
    if (config.strategy != PruneStrategy::None &&
        (k + 1) % static_cast<std::size_t>(config.prune_every) == 0) {
      PruneReport report;
      switch (config.strategy) {
        case PruneStrategy::Quantile:
          report = quantile_select(space, p, config.alpha, config.prune);
          // The global bound assumes each prune removes mass ~alpha. The
          // quantile rule includes the state covering the alpha level, which
          // on concentrated distributions can carry macroscopic weight; past
          // a 2*alpha grace band, degrade to the largest <=-alpha prefix so
          // the per-step budget stays honest.
          if (report.pruned_mass > 2.0 * config.alpha) {
            report = prune_to_mass(space, p, config.alpha, config.prune);
          }
          break;
        case PruneStrategy::PruneToMass:
          report = prune_to_mass(space, p, config.alpha, config.prune);
          break;
        case PruneStrategy::FixedThreshold:
          report = fixed_threshold_prune(space, p, config.alpha);
          break;
        case PruneStrategy::None: break;
      }
      rec.pruned_mass = report.pruned_mass;
      if (!report.removed_positions.empty()) {
        prune_and_renormalize(space, p, report);
        A = update_generator(A, space, report.removed_positions, {}, network);
      }
    }
    if (config.boundary == BoundaryMode::Closed) {
      // Fold clamped mass / tolerance-level drift back to an exact simplex.
      p.renormalize();
    }

    t = (k + 1 == n_steps) ? config.t_final : t + dt_k;
    rec.t = t;
    rec.n_states_after = space.size();
    rec.local_bound = 2.0 * rec.pruned_mass;
    cum_bound += rec.local_bound + rec.expmv_error;
    rec.cum_bound = cum_bound;
    result.steps.push_back(rec);

    if (snapshots_on && ((k + 1) % config.snapshot_every == 0 || k + 1 == n_steps)) {
      result.snapshots.push_back(take_snapshot(t, space, p));
    }
  }

  result.space = std::move(space);
  result.p = std::move(p);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

SolveResult solve_standard_fsp(const ReactionNetwork& network, const State& x0,
                               double t_final, double eps, const StandardFspOptions& opts) {
  if (x0.size() != network.n_species()) {
    throw InvalidArgumentError("solve_standard_fsp: x0 dimension mismatch");
  }
  if (!(t_final >= 0.0)) {
    throw InvalidArgumentError("solve_standard_fsp: t_final must be nonnegative");
  }
  if (!(eps > 0.0)) {
    throw InvalidArgumentError("solve_standard_fsp: eps must be positive");
  }
  const auto wall_start = std::chrono::steady_clock::now();

  ExpmvOptions expmv_opts;
  expmv_opts.tolerance =
      opts.expmv_tolerance > 0.0 ? opts.expmv_tolerance : std::min(1e-10, eps / 10.0);
  expmv_opts.max_krylov_dim = opts.max_krylov_dim;

  SolveResult result;
  StateSpace space = StateSpace::single(x0);
  ProbabilityVector p;

  for (std::size_t pass = 1; pass <= opts.max_passes; ++pass) {
    SparseGenerator A = assemble(space, network, BoundaryMode::Absorbing);
    ProbabilityVector p0 = ProbabilityVector::point_mass(space, x0);
    auto [w, report] = expmv(A, p0.weights(), t_final, expmv_opts);
    p = ProbabilityVector(std::move(w), space.generation());
    result.leaked_mass = 1.0 - p.sum();
    result.fsp_passes = pass;
    if (result.leaked_mass <= eps) break;
    if (pass == opts.max_passes) {
      throw Error("solve_standard_fsp: leak " + std::to_string(result.leaked_mass) +
                  " still above eps after " + std::to_string(pass) + " passes");
    }
    const std::vector<State> added =
        expand(space, network, opts.expansion_depth, opts.max_states);
    if (added.empty()) break;  // reachable closure; leak cannot shrink further
  }

  result.space = std::move(space);
  result.p = std::move(p);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

}  // namespace cmefsp
