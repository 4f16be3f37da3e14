#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cmefsp/network.hpp"
#include "cmefsp/solver.hpp"

namespace cmefsp {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011). Streams are
/// addressed by (key = seed, stream index in the counter high words), so
/// per-trajectory sequences are reproducible bit-for-bit regardless of
/// execution order. This generator family is fixed: changing it changes
/// every seeded result.
class PhiloxRng {
 public:
  PhiloxRng(std::uint64_t seed, std::uint64_t stream);

  /// One raw Philox4x32-10 block (counter, key) -> 4 words. Matches the
  /// reference known-answer vectors.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

  std::uint32_t next_u32();

  /// 53-bit uniform in (0, 1].
  double uniform();

  /// Exponential waiting time with the given rate.
  double exponential(double rate);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> out_{};
  int pos_ = 4;
};

/// One SSA realization: states_.front() is x0 at t0 = 0; each later entry is
/// the state after an event at the matching time. Right-continuous in time.
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  double t_final = 0.0;

  const State& state_at(double t) const;

  /// States at the grid times (right-continuous step interpolation).
  std::vector<State> sample_on_grid(std::span<const double> grid) const;

  std::size_t n_events() const { return times.size() - 1; }
};

/// Exact Gillespie simulation to t_final. `stream` selects an independent
/// substream of the seed (ensemble trajectory index).
Trajectory ssa_trajectory(const ReactionNetwork& network, const State& x0, double t_final,
                          std::uint64_t seed, std::uint64_t stream = 0);

struct EnsembleStats {
  std::vector<double> grid;
  // Indexed [species][grid point].
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> variance;  // unbiased (n-1)
  std::vector<std::vector<double>> sem;       // sqrt(variance / n)
  std::size_t n = 0;
};

/// Runs n independent trajectories (streams 0..n-1 of base_seed) and reports
/// per-species mean/variance/SEM on the grid. Aggregation is a deterministic
/// reduction in trajectory order.
EnsembleStats ensemble_stats(const ReactionNetwork& network, const State& x0, double t_final,
                             std::span<const double> grid, std::size_t n,
                             std::uint64_t base_seed);

/// Expected copy number of one species under each recorded snapshot.
std::vector<double> fsp_mean(const SolveResult& result, std::size_t species);

}  // namespace cmefsp
