#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cmefsp/network.hpp"

namespace cmefsp {

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    // FNV-1a over the raw counts.
    std::uint64_t h = 1469598103934665603ull;
    for (Count c : s) {
      auto u = static_cast<std::uint64_t>(c);
      for (int b = 0; b < 8; ++b) {
        h ^= (u >> (8 * b)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

/// Ordered set of states with a bidirectional state<->position map. Positions
/// are dense 0..size-1. Every structural change bumps the generation counter,
/// which dependent objects (probability vectors, generators, prune reports)
/// record and verify.
class StateSpace {
 public:
  explicit StateSpace(std::size_t n_species) : n_species_(n_species) {}

  static StateSpace single(State x0) {
    StateSpace s(x0.size());
    s.insert(std::move(x0));
    return s;
  }

  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  std::size_t n_species() const { return n_species_; }
  std::uint64_t generation() const { return generation_; }

  const State& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<State>& states() const { return states_; }

  std::optional<std::size_t> find(const State& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const State& x) const { return index_.count(x) != 0; }

  /// Appends x if absent; returns its position either way.
  std::size_t insert(State x);

  /// Removes the states at the given (strictly ascending) positions and
  /// compacts the survivors, preserving their relative order.
  void remove_sorted(std::span<const std::size_t> sorted_positions);

 private:
  std::size_t n_species_;
  std::vector<State> states_;
  std::unordered_map<State, std::size_t, StateHash> index_;
  std::uint64_t generation_ = 0;
};

/// Nonnegative weights aligned with StateSpace positions. Carries the
/// generation of the space it was built against; mixing a stale vector with
/// a newer space is a StaleSpaceError.
class ProbabilityVector {
 public:
  ProbabilityVector() = default;
  ProbabilityVector(std::vector<double> weights, std::uint64_t generation)
      : w_(std::move(weights)), generation_(generation) {}

  static ProbabilityVector point_mass(const StateSpace& space, const State& x);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  double& operator[](std::size_t i) { return w_[i]; }
  std::span<const double> weights() const { return w_; }
  std::vector<double>& mutable_weights() { return w_; }
  std::uint64_t generation() const { return generation_; }
  void set_generation(std::uint64_t g) { generation_ = g; }

  /// Compensated sum of all weights.
  double sum() const;

  /// Divides by the current sum so the vector sums to 1 exactly up to
  /// rounding. DegeneratePruneError if the sum is not positive.
  void renormalize();

  /// Pads zeros for states appended to `space` since this vector was built
  /// and adopts the space's generation. Existing positions must be unchanged
  /// (expansion appends, never reorders).
  void extend_for(const StateSpace& space);

  void check_generation(const StateSpace& space) const;

 private:
  std::vector<double> w_;
  std::uint64_t generation_ = 0;
};

enum class TieMode { Inclusive, Positional };

struct PruneOptions {
  TieMode ties = TieMode::Inclusive;
  /// Safety cap on the pruned mass: tie-inclusive selection falls back to
  /// positional above this, and a positional selection still above it is
  /// returned empty and flagged capped.
  double max_prune_mass = 0.5;
};

/// Outcome of a prune selection. `removed_positions` are positions in the
/// pre-prune space, strictly ascending; `removed_states` are the same states
/// by value (they survive the prune for generator updates and reporting).
struct PruneReport {
  std::vector<std::size_t> removed_positions;
  std::vector<State> removed_states;
  double pruned_mass = 0.0;
  double threshold = 0.0;  // q_alpha for quantile selection, theta/target otherwise
  bool tie_inclusive = false;
  bool capped = false;  // safety cap engaged; nothing selected
  std::uint64_t generation = 0;

  /// The l1 error induced by pruning mass m and renormalizing is exactly 2m.
  double local_error_bound() const { return 2.0 * pruned_mass; }
};

/// Adds every state reachable from the current space by firing <= depth
/// reactions with positive propensity (intermediate states stay in the
/// space's reachable closure, hence nonnegative). New states are appended, so
/// existing positions remain stable. Returns the states added, in insertion
/// order. Throws CapacityError if the result would exceed max_states.
std::vector<State> expand(StateSpace& space, const ReactionNetwork& network,
                          int depth,
                          std::size_t max_states = std::numeric_limits<std::size_t>::max());

/// Bottom-alpha-fraction selection: states sorted ascending by weight (ties
/// by position), k* the smallest index with cumulative mass >= alpha,
/// q_alpha the weight at k*. Inclusive mode selects all states with weight
/// <= q_alpha; positional mode selects exactly the first k*.
PruneReport quantile_select(const StateSpace& space, const ProbabilityVector& p,
                            double alpha, const PruneOptions& opts = {});

/// Greedy ascending prefix whose cumulative mass stays <= target.
PruneReport prune_to_mass(const StateSpace& space, const ProbabilityVector& p,
                          double target, const PruneOptions& opts = {});

/// All states with weight strictly below theta.
PruneReport fixed_threshold_prune(const StateSpace& space, const ProbabilityVector& p,
                                  double theta);

/// Deletes the report's states from the space (compacting positions) and
/// renormalizes the survivors by 1/(1 - m). The report must have been
/// produced against this exact (space, p) generation.
void prune_and_renormalize(StateSpace& space, ProbabilityVector& p,
                           const PruneReport& report);

/// l1 distance between a pre-prune distribution and the pruned+renormalized
/// one, embedding removed states as zeros. Test/diagnostic helper.
double prune_distance(const ProbabilityVector& before, const ProbabilityVector& after,
                      const PruneReport& report);

}  // namespace cmefsp
