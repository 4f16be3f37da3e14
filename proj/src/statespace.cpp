#include "cmefsp/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cmefsp {

namespace {

// Compensated (Kahan) accumulator; the prune-distance identities are checked
// to 1e-12 on vectors up to 1e4 entries, where naive summation is marginal.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

}  // namespace

std::size_t StateSpace::insert(State x) {
  if (x.size() != n_species_) {
    throw InvalidArgumentError("state dimension mismatch: got " +
                               std::to_string(x.size()) + ", space has " +
                               std::to_string(n_species_) + " species");
  }
  auto it = index_.find(x);
  if (it != index_.end()) return it->second;
  const std::size_t pos = states_.size();
  index_.emplace(x, pos);
  states_.push_back(std::move(x));
  ++generation_;
  return pos;
}

void StateSpace::remove_sorted(std::span<const std::size_t> sorted_positions) {
  if (sorted_positions.empty()) return;
  std::size_t next_removed = 0;
  std::size_t write = 0;
  for (std::size_t read = 0; read < states_.size(); ++read) {
    if (next_removed < sorted_positions.size() && sorted_positions[next_removed] == read) {
      index_.erase(states_[read]);
      ++next_removed;
      continue;
    }
    if (write != read) {
      index_[states_[read]] = write;
      states_[write] = std::move(states_[read]);
    }
    ++write;
  }
  if (next_removed != sorted_positions.size()) {
    throw InvalidArgumentError("remove_sorted: positions not strictly ascending / in range");
  }
  states_.resize(write);
  ++generation_;
}

ProbabilityVector ProbabilityVector::point_mass(const StateSpace& space, const State& x) {
  auto pos = space.find(x);
  if (!pos) throw InvalidArgumentError("point_mass: state not in space");
  std::vector<double> w(space.size(), 0.0);
  w[*pos] = 1.0;
  return ProbabilityVector(std::move(w), space.generation());
}

double ProbabilityVector::sum() const {
  KahanSum k;
  for (double x : w_) k.add(x);
  return k.value();
}

void ProbabilityVector::renormalize() {
  const double s = sum();
  if (!(s > 0.0)) {
    throw DegeneratePruneError("cannot renormalize: total mass is " + std::to_string(s));
  }
  for (double& x : w_) x /= s;
}

void ProbabilityVector::extend_for(const StateSpace& space) {
  if (w_.size() > space.size()) {
    throw StaleSpaceError("probability vector longer than space");
  }
  w_.resize(space.size(), 0.0);
  generation_ = space.generation();
}

void ProbabilityVector::check_generation(const StateSpace& space) const {
  if (generation_ != space.generation() || w_.size() != space.size()) {
    throw StaleSpaceError("probability vector generation " + std::to_string(generation_) +
                          " does not match state space generation " +
                          std::to_string(space.generation()));
  }
}

std::vector<State> expand(StateSpace& space, const ReactionNetwork& network, int depth,
                          std::size_t max_states) {
  if (space.empty()) {
    throw InvalidArgumentError("expand: state space is empty");
  }
  if (depth < 1) {
    throw InvalidArgumentError("expand: depth must be positive");
  }
  std::vector<State> added;
  // Round 1 scans every existing state; later rounds only the newly added.
  std::size_t frontier_begin = 0;
  std::size_t frontier_end = space.size();
  for (int round = 0; round < depth; ++round) {
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (std::size_t k = 0; k < network.n_reactions(); ++k) {
        const State& x = space[i];
        if (network.propensity(k, x) <= 0.0) continue;
        State target = x;
        const State& nu = network.change_vector(k);
        for (std::size_t s = 0; s < target.size(); ++s) target[s] += nu[s];
        if (space.contains(target)) continue;
        if (space.size() + 1 > max_states) {
          throw CapacityError(max_states, space.size() + 1);
        }
        space.insert(target);
        added.push_back(std::move(target));
      }
    }
    frontier_begin = frontier_end;
    frontier_end = space.size();
    if (frontier_begin == frontier_end) break;  // closure reached early
  }
  return added;
}

namespace {

// Positions sorted ascending by (weight, position); the position tiebreak
// makes every selection deterministic.
std::vector<std::size_t> ascending_order(std::span<const double> w) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (w[a] != w[b]) return w[a] < w[b];
    return a < b;
  });
  return order;
}

PruneReport finalize_report(const StateSpace& space, std::vector<std::size_t> positions,
                            double threshold, bool tie_inclusive) {
  std::sort(positions.begin(), positions.end());
  PruneReport report;
  report.removed_states.reserve(positions.size());
  for (std::size_t pos : positions) {
    report.removed_states.push_back(space[pos]);
  }
  report.removed_positions = std::move(positions);
  report.threshold = threshold;
  report.tie_inclusive = tie_inclusive;
  report.generation = space.generation();
  return report;
}

double mass_of(std::span<const double> w, std::span<const std::size_t> positions) {
  KahanSum k;
  for (std::size_t pos : positions) k.add(w[pos]);
  return k.value();
}

}  // namespace

PruneReport quantile_select(const StateSpace& space, const ProbabilityVector& p,
                            double alpha, const PruneOptions& opts) {
  p.check_generation(space);
  if (!(alpha >= 0.0) || alpha >= 1.0) {
    throw InvalidArgumentError("quantile_select: alpha must be in [0, 1)");
  }
  PruneReport empty;
  empty.generation = space.generation();
  empty.tie_inclusive = (opts.ties == TieMode::Inclusive);
  if (alpha == 0.0 || p.size() == 0) return empty;

  const auto w = p.weights();
  const auto order = ascending_order(w);

  // k_star: count of sorted states whose cumulative mass first reaches alpha.
  KahanSum cum;
  std::size_t k_star = order.size();
  for (std::size_t k = 0; k < order.size(); ++k) {
    cum.add(w[order[k]]);
    if (cum.value() >= alpha) {
      k_star = k + 1;
      break;
    }
  }
  const double q_alpha = w[order[k_star - 1]];

  auto positional = [&] {
    return std::vector<std::size_t>(order.begin(), order.begin() + k_star);
  };
  auto inclusive = [&] {
    // Extend through the tie block: everything with weight <= q_alpha.
    std::size_t j = k_star;
    while (j < order.size() && w[order[j]] <= q_alpha) ++j;
    return std::vector<std::size_t>(order.begin(), order.begin() + j);
  };

  std::vector<std::size_t> selected;
  bool used_inclusive = false;
  if (opts.ties == TieMode::Inclusive) {
    selected = inclusive();
    used_inclusive = true;
    if (mass_of(w, selected) > opts.max_prune_mass) {
      selected = positional();  // tie saturation: fall back
      used_inclusive = false;
    }
  } else {
    selected = positional();
  }
  double m = mass_of(w, selected);
  if (m > opts.max_prune_mass) {
    empty.capped = true;
    empty.threshold = q_alpha;
    return empty;
  }
  PruneReport report = finalize_report(space, std::move(selected), q_alpha, used_inclusive);
  report.pruned_mass = m;
  return report;
}

PruneReport prune_to_mass(const StateSpace& space, const ProbabilityVector& p,
                          double target, const PruneOptions& opts) {
  (void)opts;
  p.check_generation(space);
  if (!(target >= 0.0) || target >= 1.0) {
    throw InvalidArgumentError("prune_to_mass: target must be in [0, 1)");
  }
  const auto w = p.weights();
  const auto order = ascending_order(w);
  std::vector<std::size_t> selected;
  KahanSum cum;
  for (std::size_t pos : order) {
    cum.add(w[pos]);
    if (cum.value() > target) break;
    selected.push_back(pos);
  }
  double m = mass_of(w, selected);
  PruneReport report = finalize_report(space, std::move(selected), target, false);
  report.pruned_mass = m;
  return report;
}

PruneReport fixed_threshold_prune(const StateSpace& space, const ProbabilityVector& p,
                                  double theta) {
  p.check_generation(space);
  if (!(theta >= 0.0)) {
    throw InvalidArgumentError("fixed_threshold_prune: theta must be >= 0");
  }
  const auto w = p.weights();
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < theta) selected.push_back(i);
  }
  double m = mass_of(w, selected);
  PruneReport report = finalize_report(space, std::move(selected), theta, false);
  report.pruned_mass = m;
  return report;
}

void prune_and_renormalize(StateSpace& space, ProbabilityVector& p,
                           const PruneReport& report) {
  p.check_generation(space);
  if (report.generation != space.generation()) {
    throw StaleSpaceError("prune report generation " + std::to_string(report.generation) +
                          " does not match space generation " +
                          std::to_string(space.generation()));
  }
  if (report.removed_positions.empty()) return;
  const double m = report.pruned_mass;
  if (!(m < 1.0) || report.removed_positions.size() >= space.size()) {
    throw DegeneratePruneError("prune removes all mass (m = " + std::to_string(m) + ")");
  }

  std::vector<double> survivors;
  survivors.reserve(p.size() - report.removed_positions.size());
  std::size_t next_removed = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (next_removed < report.removed_positions.size() &&
        report.removed_positions[next_removed] == i) {
      ++next_removed;
      continue;
    }
    survivors.push_back(p[i] / (1.0 - m));
  }
  space.remove_sorted(report.removed_positions);
  p = ProbabilityVector(std::move(survivors), space.generation());
}

double prune_distance(const ProbabilityVector& before, const ProbabilityVector& after,
                      const PruneReport& report) {
  KahanSum dist;
  std::size_t next_removed = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (next_removed < report.removed_positions.size() &&
        report.removed_positions[next_removed] == i) {
      dist.add(std::abs(before[i]));
      ++next_removed;
      continue;
    }
    dist.add(std::abs(after[j] - before[i]));
    ++j;
  }
  return dist.value();
}

}  // namespace cmefsp
