#include "cmefsp/network.hpp"

#include <cmath>
#include <set>

namespace cmefsp {

namespace {

void validate_coefficients(const std::map<std::size_t, Count>& side,
                           std::size_t n_species, const char* which) {
  for (const auto& [idx, coeff] : side) {
    if (idx >= n_species) {
      throw InvalidNetworkError(std::string(which) + " references species index " +
                                std::to_string(idx) + " out of range (N = " +
                                std::to_string(n_species) + ")");
    }
    if (coeff < 0) {
      throw InvalidNetworkError(std::string(which) + " coefficient for species " +
                                std::to_string(idx) + " is negative");
    }
  }
}

void validate_propensity(const PropensityExpr& expr, std::size_t n_species) {
  if (const auto* ma = std::get_if<MassAction>(&expr)) {
    if (!(ma->rate >= 0.0) || !std::isfinite(ma->rate)) {
      throw InvalidNetworkError("mass-action rate must be finite and nonnegative");
    }
  } else if (const auto* h = std::get_if<Hill>(&expr)) {
    if (!(h->base >= 0.0) || !(h->amplitude >= 0.0) || !(h->scale >= 0.0)) {
      throw InvalidNetworkError("Hill base/amplitude/scale must be nonnegative");
    }
    if (!(h->threshold > 0.0)) {
      throw InvalidNetworkError("Hill threshold must be positive");
    }
    if (h->exponent < 1) {
      throw InvalidNetworkError("Hill exponent must be a positive integer");
    }
    if (h->regulator >= n_species) {
      throw InvalidNetworkError("Hill regulator index out of range");
    }
  } else if (const auto* c = std::get_if<Constant>(&expr)) {
    if (!(c->rate >= 0.0) || !std::isfinite(c->rate)) {
      throw InvalidNetworkError("constant rate must be finite and nonnegative");
    }
  }
}

// x(x-1)...(x-a+1)/a! -- number of distinct reactant combinations.
double falling_factorial_count(Count x, Count a) {
  if (x < a) return 0.0;
  double num = 1.0;
  for (Count i = 0; i < a; ++i) num *= static_cast<double>(x - i);
  double fact = 1.0;
  for (Count i = 2; i <= a; ++i) fact *= static_cast<double>(i);
  return num / fact;
}

}  // namespace

State change_vector(const Reaction& reaction, std::size_t n_species) {
  validate_coefficients(reaction.reactants, n_species, "reactants");
  validate_coefficients(reaction.products, n_species, "products");
  State nu(n_species, 0);
  for (const auto& [idx, coeff] : reaction.products) nu[idx] += coeff;
  for (const auto& [idx, coeff] : reaction.reactants) nu[idx] -= coeff;
  bool nonzero = false;
  for (Count c : nu) nonzero |= (c != 0);
  if (!nonzero) {
    throw InvalidNetworkError("reaction change vector is zero (reactants == products)");
  }
  return nu;
}

double propensity(const Reaction& reaction, const State& x) {
  // Gate on reactant availability for every propensity kind.
  for (const auto& [idx, coeff] : reaction.reactants) {
    if (x[idx] < coeff) return 0.0;
  }
  if (const auto* ma = std::get_if<MassAction>(&reaction.propensity)) {
    double a = ma->rate;
    for (const auto& [idx, coeff] : reaction.reactants) {
      if (coeff == 1) {
        a *= static_cast<double>(x[idx]);
      } else {
        a *= falling_factorial_count(x[idx], coeff);
      }
    }
    return a;
  }
  if (const auto* h = std::get_if<Hill>(&reaction.propensity)) {
    const double xr = static_cast<double>(x[h->regulator]);
    const double tn = std::pow(h->threshold, h->exponent);
    const double xn = std::pow(xr, h->exponent);
    const double frac = (h->direction == HillDirection::Repressing)
                            ? tn / (tn + xn)
                            : xn / (tn + xn);
    return h->scale * (h->base + h->amplitude * frac);
  }
  return std::get<Constant>(reaction.propensity).rate;
}

ReactionNetwork::ReactionNetwork(std::vector<Species> species,
                                 std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
  if (reactions_.empty()) {
    throw InvalidNetworkError("network must have at least one reaction");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < species_.size(); ++i) {
    if (species_[i].index != i) {
      throw InvalidNetworkError("species indices must be dense 0..N-1 in order");
    }
    if (!names.insert(species_[i].name).second) {
      throw InvalidNetworkError("duplicate species name '" + species_[i].name + "'");
    }
  }
  change_vectors_.reserve(reactions_.size());
  for (const auto& r : reactions_) {
    validate_propensity(r.propensity, species_.size());
    change_vectors_.push_back(cmefsp::change_vector(r, species_.size()));
  }
}

double ReactionNetwork::propensity(std::size_t k, const State& x) const {
  return cmefsp::propensity(reactions_[k], x);
}

double ReactionNetwork::total_propensity(const State& x) const {
  double a0 = 0.0;
  for (std::size_t k = 0; k < reactions_.size(); ++k) a0 += propensity(k, x);
  return a0;
}

std::size_t ReactionNetwork::species_index(const std::string& name) const {
  for (const auto& s : species_) {
    if (s.name == name) return s.index;
  }
  throw InvalidArgumentError("unknown species '" + name + "'");
}

}  // namespace cmefsp
