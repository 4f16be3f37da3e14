#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "cmefsp/generator.hpp"

namespace cmefsp {

struct ExpmvOptions {
  /// l1-relative target: the returned vector satisfies
  /// |exp(A t) v - w|_1 <= tolerance * |v|_1.
  double tolerance = 1e-8;
  int max_krylov_dim = 64;
  int start_krylov_dim = 30;
  int max_substeps = 10000;
  /// When v is a probability vector, zero out negative entries smaller in
  /// magnitude than tolerance * |v|_1.
  bool clamp_negatives = false;
};

struct ExpmvReport {
  int substeps = 0;
  int krylov_dim = 0;         // dimension of the last subspace built
  double estimated_error = 0.0;  // accumulated l1 estimate (absolute)
};

/// w ~ exp(A t) v by Arnoldi projection with internal substepping and
/// adaptive subspace dimension. Throws ExpmvFailure if the substep budget is
/// exhausted before reaching t.
std::pair<std::vector<double>, ExpmvReport> expmv(const SparseGenerator& A,
                                                  std::span<const double> v, double t,
                                                  const ExpmvOptions& opts = {});

/// exp(A t) by Pade-13 scaling and squaring, accurate to near machine
/// precision. Dense oracle for small systems; dimensions above `cap` throw
/// OracleCapError.
Eigen::MatrixXd dense_expm(const Eigen::MatrixXd& A, double t, std::size_t cap = 1024);

/// Dense copy of a sparse generator (oracle plumbing).
Eigen::MatrixXd to_dense(const SparseGenerator& A);

/// Compensated l1 norm.
double l1_norm(std::span<const double> v);

}  // namespace cmefsp
