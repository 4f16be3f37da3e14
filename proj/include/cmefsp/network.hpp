#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cmefsp/errors.hpp"

namespace cmefsp {

/// Copy number of one species. Signed so that change vectors reuse the type.
using Count = std::int64_t;

/// A state is the vector of copy numbers, one entry per species.
using State = std::vector<Count>;

struct Species {
  std::string name;
  std::size_t index = 0;
};

/// Mass-action kinetics. The reaction rate constant; reactant orders come
/// from the reaction's reactant stoichiometry. Coefficients >= 2 use
/// combinatorial counting x(x-1)...(x-a+1)/a!.
struct MassAction {
  double rate = 0.0;
};

enum class HillDirection { Repressing, Activating };

/// Closed Hill family: scale * (base + amplitude * H(x_reg)) where H is
/// threshold^n/(threshold^n + x^n) (repressing) or x^n/(threshold^n + x^n)
/// (activating).
struct Hill {
  double base = 0.0;
  double amplitude = 0.0;
  double threshold = 1.0;
  int exponent = 1;
  std::size_t regulator = 0;
  HillDirection direction = HillDirection::Repressing;
  double scale = 1.0;
};

/// State-independent rate (still gated on reactant availability).
struct Constant {
  double rate = 0.0;
};

using PropensityExpr = std::variant<MassAction, Hill, Constant>;

struct Reaction {
  std::map<std::size_t, Count> reactants;  // species index -> coefficient
  std::map<std::size_t, Count> products;
  PropensityExpr propensity;
};

/// Immutable after construction; the constructor validates all invariants
/// (species names unique, indices dense, change vectors nonzero, referenced
/// indices in range). Safe to share across threads.
class ReactionNetwork {
 public:
  ReactionNetwork(std::vector<Species> species, std::vector<Reaction> reactions);

  std::size_t n_species() const { return species_.size(); }
  std::size_t n_reactions() const { return reactions_.size(); }
  const std::vector<Species>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  const Reaction& reaction(std::size_t k) const { return reactions_.at(k); }

  /// Precomputed change vector nu_k = products - reactants of reaction k.
  const State& change_vector(std::size_t k) const { return change_vectors_.at(k); }

  /// Propensity of reaction k at state x. Zero whenever any reactant count
  /// is below its coefficient, so transitions never leave the nonnegative
  /// orthant.
  double propensity(std::size_t k, const State& x) const;

  /// Sum of all reaction propensities at x (the SSA total rate a0, also the
  /// absorbing-mode diagonal magnitude).
  double total_propensity(const State& x) const;

  std::size_t species_index(const std::string& name) const;

 private:
  std::vector<Species> species_;
  std::vector<Reaction> reactions_;
  std::vector<State> change_vectors_;
};

/// Standalone change-vector computation, validating the reaction against
/// n_species. nu_i = b_i - a_i.
State change_vector(const Reaction& reaction, std::size_t n_species);

/// Standalone propensity evaluation (same semantics as the member function).
double propensity(const Reaction& reaction, const State& x);

}  // namespace cmefsp
