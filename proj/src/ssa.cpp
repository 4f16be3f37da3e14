#include "cmefsp/ssa.hpp"

#include <algorithm>
#include <cmath>

namespace cmefsp {

namespace {

inline void mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

}  // namespace

PhiloxRng::PhiloxRng(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream) {}

std::array<std::uint32_t, 4> PhiloxRng::block(std::array<std::uint32_t, 4> counter,
                                              std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo32(kPhiloxM0, counter[0], hi0, lo0);
    mulhilo32(kPhiloxM1, counter[2], hi1, lo1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return counter;
}

void PhiloxRng::refill() {
  out_ = block({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
               key_);
  pos_ = 0;
  ++block_;
}

std::uint32_t PhiloxRng::next_u32() {
  if (pos_ == 4) refill();
  return out_[pos_++];
}

double PhiloxRng::uniform() {
  const std::uint64_t hi = next_u32();
  const std::uint64_t lo = next_u32();
  const std::uint64_t bits = ((hi << 32) | lo) >> 11;  // 53 bits
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double PhiloxRng::exponential(double rate) {
  return -std::log(uniform()) / rate;
}

const State& Trajectory::state_at(double t) const {
  // Last event at or before t (right-continuous step interpolation).
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t idx = (it == times.begin()) ? 0 : (it - times.begin() - 1);
  return states[idx];
}

std::vector<State> Trajectory::sample_on_grid(std::span<const double> grid) const {
  std::vector<State> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(state_at(t));
  return out;
}

Trajectory ssa_trajectory(const ReactionNetwork& network, const State& x0, double t_final,
                          std::uint64_t seed, std::uint64_t stream) {
  if (x0.size() != network.n_species()) {
    throw InvalidArgumentError("ssa_trajectory: x0 dimension mismatch");
  }
  PhiloxRng rng(seed, stream);
  Trajectory traj;
  traj.t_final = t_final;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  State state = x0;
  std::vector<double> alphas(network.n_reactions());
  double t = 0.0;
  while (true) {
    double a0 = 0.0;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      alphas[k] = network.propensity(k, state);
      a0 += alphas[k];
    }
    if (a0 <= 0.0) break;  // absorbing state, frozen to t_final
    t += rng.exponential(a0);
    if (t > t_final) break;
    const double pick = rng.uniform() * a0;
    double cum = 0.0;
    std::size_t chosen = alphas.size() - 1;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      cum += alphas[k];
      if (pick <= cum && alphas[k] > 0.0) {
        chosen = k;
        break;
      }
    }
    const State& nu = network.change_vector(chosen);
    for (std::size_t s = 0; s < state.size(); ++s) state[s] += nu[s];
    traj.times.push_back(t);
    traj.states.push_back(state);
  }
  return traj;
}

EnsembleStats ensemble_stats(const ReactionNetwork& network, const State& x0, double t_final,
                             std::span<const double> grid, std::size_t n,
                             std::uint64_t base_seed) {
  if (n < 2) {
    throw InvalidArgumentError("ensemble_stats: need at least 2 trajectories");
  }
  if (grid.empty()) {
    throw InvalidArgumentError("ensemble_stats: empty grid");
  }
  for (double g : grid) {
    if (!(g >= 0.0) || g > t_final) {
      throw InvalidArgumentError("ensemble_stats: grid times must lie in [0, t_final]");
    }
  }
  const std::size_t n_species = network.n_species();
  const std::size_t n_grid = grid.size();

  EnsembleStats stats;
  stats.grid.assign(grid.begin(), grid.end());
  stats.n = n;
  stats.mean.assign(n_species, std::vector<double>(n_grid, 0.0));
  stats.variance.assign(n_species, std::vector<double>(n_grid, 0.0));
  stats.sem.assign(n_species, std::vector<double>(n_grid, 0.0));

  // Welford accumulation, trajectories processed in stream order.
  std::vector<std::vector<double>> m2(n_species, std::vector<double>(n_grid, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const Trajectory traj = ssa_trajectory(network, x0, t_final, base_seed, i);
    const double count = static_cast<double>(i + 1);
    for (std::size_t g = 0; g < n_grid; ++g) {
      const State& x = traj.state_at(grid[g]);
      for (std::size_t s = 0; s < n_species; ++s) {
        const double value = static_cast<double>(x[s]);
        const double delta = value - stats.mean[s][g];
        stats.mean[s][g] += delta / count;
        m2[s][g] += delta * (value - stats.mean[s][g]);
      }
    }
  }
  for (std::size_t s = 0; s < n_species; ++s) {
    for (std::size_t g = 0; g < n_grid; ++g) {
      stats.variance[s][g] = m2[s][g] / static_cast<double>(n - 1);
      stats.sem[s][g] = std::sqrt(stats.variance[s][g] / static_cast<double>(n));
    }
  }
  return stats;
}

std::vector<double> fsp_mean(const SolveResult& result, std::size_t species) {
  if (result.snapshots.empty()) {
    throw UsageError("fsp_mean: no snapshots recorded (set snapshot_every > 0)");
  }
  std::vector<double> means;
  means.reserve(result.snapshots.size());
  for (const Snapshot& snap : result.snapshots) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < snap.states.size(); ++i) {
      const double term = static_cast<double>(snap.states[i][species]) * snap.probs[i];
      double y = term - c;
      double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    means.push_back(s);
  }
  return means;
}

}  // namespace cmefsp
