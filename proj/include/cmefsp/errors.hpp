#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmefsp {

/// Base class for all solver-domain errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed network definition (bad species index, zero change vector, ...).
class InvalidNetworkError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied argument is outside its documented domain.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// The truncated state space would exceed the configured maximum.
class CapacityError : public Error {
 public:
  CapacityError(std::size_t cap, std::size_t requested)
      : Error("state space capacity exceeded: need " + std::to_string(requested) +
              " states, max_states = " + std::to_string(cap)),
        cap_(cap),
        requested_(requested) {}

  std::size_t cap() const { return cap_; }
  std::size_t requested() const { return requested_; }

 private:
  std::size_t cap_;
  std::size_t requested_;
};

/// An object built against an older StateSpace generation was used after the
/// space changed.
class StaleSpaceError : public Error {
 public:
  using Error::Error;
};

/// A prune removed all probability mass; the survivors cannot be renormalized.
class DegeneratePruneError : public Error {
 public:
  using Error::Error;
};

/// Requested dense exponential above the oracle dimension cap.
class OracleCapError : public Error {
 public:
  using Error::Error;
};

/// Krylov propagation failed to reach the requested tolerance. Carries the
/// best vector obtained and the error bound it is known to satisfy.
class ExpmvFailure : public Error {
 public:
  ExpmvFailure(std::string what, std::vector<double> best, double bound)
      : Error(std::move(what)), best_(std::move(best)), error_bound_(bound) {}

  const std::vector<double>& best_estimate() const { return best_; }
  double error_bound() const { return error_bound_; }

 private:
  std::vector<double> best_;
  double error_bound_;
};

/// Config file could not be parsed or failed schema validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Run refused because the error budget check failed and was not overridden.
class BudgetRefusedError : public Error {
 public:
  using Error::Error;
};

/// API misuse (e.g. asking for snapshot statistics when none were recorded).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace cmefsp
