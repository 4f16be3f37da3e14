#pragma once

// Shared builders for unit and acceptance tests: small canonical models,
// random generator instances, and dense comparison helpers.

#include <cmath>
#include <random>
#include <vector>

#include "cmefsp/bench.hpp"
#include "cmefsp/generator.hpp"
#include "cmefsp/krylov.hpp"
#include "cmefsp/network.hpp"
#include "cmefsp/statespace.hpp"

namespace testsupport {

using namespace cmefsp;

inline ReactionNetwork birth_death_network(double lambda, double mu) {
  return ReactionNetwork({{"X", 0}},
                         {{{}, {{0, 1}}, MassAction{lambda}}, {{{0, 1}}, {}, MassAction{mu}}});
}

inline ReactionNetwork pure_birth_network(double lambda) {
  return ReactionNetwork({{"X", 0}}, {{{}, {{0, 1}}, MassAction{lambda}}});
}

inline ReactionNetwork pure_death_network(double mu) {
  return ReactionNetwork({{"X", 0}}, {{{{0, 1}}, {}, MassAction{mu}}});
}

/// 1-D space {0, 1, ..., n-1}.
inline StateSpace interval_space(std::size_t n) {
  StateSpace space(1);
  for (std::size_t i = 0; i < n; ++i) space.insert(State{static_cast<Count>(i)});
  return space;
}

/// 2-D box {0..nx-1} x {0..ny-1}, row-major insertion order.
inline StateSpace box_space(std::size_t nx, std::size_t ny) {
  StateSpace space(2);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      space.insert(State{static_cast<Count>(x), static_cast<Count>(y)});
    }
  }
  return space;
}

inline ProbabilityVector weights_on(const StateSpace& space, std::vector<double> w) {
  return ProbabilityVector(std::move(w), space.generation());
}

inline ProbabilityVector random_probability(const StateSpace& space, std::mt19937& rng) {
  std::exponential_distribution<double> exp_dist(1.0);
  std::vector<double> w(space.size());
  double sum = 0.0;
  for (double& x : w) {
    x = exp_dist(rng);
    sum += x;
  }
  for (double& x : w) x /= sum;
  return weights_on(space, std::move(w));
}

struct RandomInstance {
  ReactionNetwork network;
  StateSpace space;
  SparseGenerator generator;
};

/// Random CTMC generator instance: a birth-death chain or a two-species
/// Lotka-Volterra box with random rates, assembled in the given mode.
inline RandomInstance random_generator_instance(std::mt19937& rng, std::size_t max_dim,
                                                BoundaryMode mode) {
  std::uniform_real_distribution<double> rate(0.05, 3.0);
  std::uniform_int_distribution<int> coin(0, 1);
  if (coin(rng) == 0) {
    std::uniform_int_distribution<std::size_t> dim(2, max_dim);
    const std::size_t n = dim(rng);
    ReactionNetwork net = birth_death_network(rate(rng), rate(rng));
    StateSpace space = interval_space(n);
    SparseGenerator gen = assemble(space, net, mode);
    return {std::move(net), std::move(space), std::move(gen)};
  }
  const std::size_t side_max = static_cast<std::size_t>(std::sqrt(double(max_dim)));
  std::uniform_int_distribution<std::size_t> side(2, std::max<std::size_t>(side_max, 2));
  const std::size_t nx = side(rng), ny = side(rng);
  ReactionNetwork net = lotka_volterra(rate(rng) * 0.1, rate(rng) * 0.01, rate(rng)).network;
  StateSpace space = box_space(nx, ny);
  SparseGenerator gen = assemble(space, net, mode);
  return {std::move(net), std::move(space), std::move(gen)};
}

/// Max relative entrywise difference between two generators on the same
/// space (denominator max(|a|, |b|, 1e-300)).
inline double max_rel_entry_diff(const SparseGenerator& A, const SparseGenerator& B) {
  if (A.dimension() != B.dimension()) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd Da = to_dense(A);
  const Eigen::MatrixXd Db = to_dense(B);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < Da.cols(); ++j) {
    for (Eigen::Index i = 0; i < Da.rows(); ++i) {
      const double a = Da(i, j), b = Db(i, j);
      const double denom = std::max({std::abs(a), std::abs(b), 1e-300});
      worst = std::max(worst, std::abs(a - b) / denom);
    }
  }
  return worst;
}

inline double l1_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double y = std::abs(a[i] - b[i]) - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace testsupport
