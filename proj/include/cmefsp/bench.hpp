#pragma once

#include <string>

#include "cmefsp/network.hpp"
#include "cmefsp/solver.hpp"

namespace cmefsp {

struct BenchmarkModel {
  std::string name;
  std::string description;
  ReactionNetwork network;
  State x0;
  SolverConfig config;
};

/// Predator-prey: X1 -> 2X1 (rate a), X1 + X2 -> 2X2 (rate b), X2 -> 0
/// (rate c). Defaults (a, b, c) = (0.1, 0.005, 0.6), x0 = (50, 100).
BenchmarkModel lotka_volterra(double a = 0.1, double b = 0.005, double c = 0.6);

/// Enzyme kinetics over (E, S, ES, P): E + S -> ES (k1), ES -> E + S (k-1),
/// ES -> E + P (k2). Defaults (0.01, 0.1, 0.1), x0 = (50, 10, 1, 1).
BenchmarkModel michaelis_menten(double k1 = 0.01, double km1 = 0.1, double k2 = 0.1);

struct ToggleParams {
  // Production of U, repressed by V: eta * (alpha1 + beta1*K1^3/(K1^3 + V^3)).
  double eta = 1.0;
  double alpha1 = 0.15;
  double beta1 = 9.0;
  double k1 = 5.0;
  // Production of V, repressed by U (symmetric defaults).
  double alpha2 = 0.15;
  double beta2 = 9.0;
  double k2 = 5.0;
  // Degradation: U at rate d1 + s*gamma/(1+s) per copy, V at rate d2 per copy.
  double d1 = 0.5;
  double d2 = 0.5;
  double gamma = 0.0;
  double s = 0.0;
  /// When set, U degradation fires at the constant rate d1 + s*gamma/(1+s)
  /// independent of the U copy number (still gated at U = 0). Default is
  /// copy-number-proportional.
  bool constant_rate_degradation_u = false;
};

/// Two mutually repressing proteins (U, V) with cubic Hill production and
/// linear degradation; bistable with the default parameters. x0 = (85, 5).
BenchmarkModel toggle_switch(const ToggleParams& params = {});

/// One species: 0 -> X at rate lambda, X -> 0 at rate mu per copy. `cap`
/// (when nonzero) records the truncation domain {0..cap} intended for dense
/// oracle comparisons and sizes max_states accordingly.
BenchmarkModel birth_death(double lambda, double mu, std::size_t cap = 0);

}  // namespace cmefsp
