#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cmefsp/network.hpp"
#include "cmefsp/statespace.hpp"

namespace cmefsp {

enum class BoundaryMode { Closed, Absorbing };

/// Column-oriented sparse CME generator over a truncated state space.
/// Off-diagonal entry (i, j) is the total propensity of reactions taking
/// state j to state i. Closed mode puts -(in-space outflow) on the diagonal
/// so columns sum to zero; absorbing mode puts -(total outflow), so column
/// sums measure leakage out of the space.
class SparseGenerator {
 public:
  struct Entry {
    std::size_t row;
    double rate;
  };

  SparseGenerator() = default;
  SparseGenerator(std::vector<std::vector<Entry>> columns, BoundaryMode mode,
                  std::uint64_t generation)
      : columns_(std::move(columns)), mode_(mode), generation_(generation) {}

  std::size_t dimension() const { return columns_.size(); }
  BoundaryMode boundary_mode() const { return mode_; }
  std::uint64_t generation() const { return generation_; }

  /// Entries of column j, sorted by row (diagonal included when nonzero).
  std::span<const Entry> column(std::size_t j) const { return columns_[j]; }

  std::size_t entry_count() const;

  /// Stored value at (row, col); 0 if no entry. Linear in the column length.
  double entry(std::size_t row, std::size_t col) const;

  double column_sum(std::size_t col) const;

  /// Max absolute column sum (the induced l1 operator norm).
  double one_norm() const;

  /// y = A x (y is overwritten).
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  /// Coordinate-format text dump: one "row col rate" line per entry.
  void dump_coordinate(std::ostream& os) const;

  void check_generation(const StateSpace& space) const;

 private:
  std::vector<std::vector<Entry>> columns_;
  BoundaryMode mode_ = BoundaryMode::Closed;
  std::uint64_t generation_ = 0;
};

/// Builds the generator from scratch over the given space.
SparseGenerator assemble(const StateSpace& space, const ReactionNetwork& network,
                         BoundaryMode mode);

/// Incrementally rebuilds a generator after a space transition: the states at
/// `removed_old_positions` (strictly ascending positions in A's space) were
/// deleted with survivors compacted in order, then `added` were appended.
/// `space_after` must be exactly that updated space. The result equals
/// assemble(space_after, network, A.boundary_mode()).
SparseGenerator update_generator(const SparseGenerator& A, const StateSpace& space_after,
                                 std::span<const std::size_t> removed_old_positions,
                                 std::span<const State> added,
                                 const ReactionNetwork& network);

/// Carries weights between spaces by state identity: weights of states absent
/// from space_new are dropped, states new to space_new get zero. No
/// renormalization.
ProbabilityVector embed(const ProbabilityVector& p_old, const StateSpace& space_old,
                        const StateSpace& space_new);

}  // namespace cmefsp
