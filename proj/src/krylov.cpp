#include "cmefsp/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cmefsp {

double l1_norm(std::span<const double> v) {
  double s = 0.0, c = 0.0;
  for (double x : v) {
    double y = std::abs(x) - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

Eigen::MatrixXd to_dense(const SparseGenerator& A) {
  const auto n = static_cast<Eigen::Index>(A.dimension());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < A.dimension(); ++j) {
    for (const auto& e : A.column(j)) {
      D(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(j)) += e.rate;
    }
  }
  return D;
}

namespace {

double mat_l1_norm(const Eigen::MatrixXd& M) {
  return M.cwiseAbs().colwise().sum().maxCoeff();
}

// Scaled truncated Taylor series. Used for the small Hessenberg exponentials
// inside expmv; kept independent of the Pade-13 path below so the two can
// cross-check each other.
Eigen::MatrixXd expm_taylor_small(const Eigen::MatrixXd& M) {
  const auto n = M.rows();
  const double norm = mat_l1_norm(M);
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Eigen::MatrixXd X = M * std::ldexp(1.0, -squarings);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 60; ++k) {
    term = (term * X) / static_cast<double>(k);
    sum += term;
    if (mat_l1_norm(term) <= 1e-18 * mat_l1_norm(sum)) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

void pade3(const Eigen::MatrixXd& A, Eigen::MatrixXd& U, Eigen::MatrixXd& V) {
  const double b[] = {120., 60., 12., 1.};
  const auto n = A.rows();
  const Eigen::MatrixXd A2 = A * A;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  U.noalias() = A * (b[3] * A2 + b[1] * I);
  V = b[2] * A2 + b[0] * I;
}

void pade5(const Eigen::MatrixXd& A, Eigen::MatrixXd& U, Eigen::MatrixXd& V) {
  const double b[] = {30240., 15120., 3360., 420., 30., 1.};
  const auto n = A.rows();
  const Eigen::MatrixXd A2 = A * A;
  const Eigen::MatrixXd A4 = A2 * A2;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  U.noalias() = A * (b[5] * A4 + b[3] * A2 + b[1] * I);
  V = b[4] * A4 + b[2] * A2 + b[0] * I;
}

void pade7(const Eigen::MatrixXd& A, Eigen::MatrixXd& U, Eigen::MatrixXd& V) {
  const double b[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
  const auto n = A.rows();
  const Eigen::MatrixXd A2 = A * A;
  const Eigen::MatrixXd A4 = A2 * A2;
  const Eigen::MatrixXd A6 = A4 * A2;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  U.noalias() = A * (b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  V = b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

void pade9(const Eigen::MatrixXd& A, Eigen::MatrixXd& U, Eigen::MatrixXd& V) {
  const double b[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                      2162160.,     110880.,     3960.,       90.,        1.};
  const auto n = A.rows();
  const Eigen::MatrixXd A2 = A * A;
  const Eigen::MatrixXd A4 = A2 * A2;
  const Eigen::MatrixXd A6 = A4 * A2;
  const Eigen::MatrixXd A8 = A6 * A2;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  U.noalias() = A * (b[9] * A8 + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  V = b[8] * A8 + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

void pade13(const Eigen::MatrixXd& A, Eigen::MatrixXd& U, Eigen::MatrixXd& V) {
  const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                      1187353796428800.,  129060195264000.,   10559470521600.,
                      670442572800.,      33522128640.,       1323241920.,
                      40840800.,          960960.,            16380.,
                      182.,               1.};
  const auto n = A.rows();
  const Eigen::MatrixXd A2 = A * A;
  const Eigen::MatrixXd A4 = A2 * A2;
  const Eigen::MatrixXd A6 = A4 * A2;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd W = b[13] * A6 + b[11] * A4 + b[9] * A2;
  Eigen::MatrixXd tmp = A6 * W;
  tmp += b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I;
  U.noalias() = A * tmp;
  W = b[12] * A6 + b[10] * A4 + b[8] * A2;
  V.noalias() = A6 * W;
  V += b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

}  // namespace

Eigen::MatrixXd dense_expm(const Eigen::MatrixXd& A, double t, std::size_t cap) {
  if (A.rows() != A.cols()) {
    throw InvalidArgumentError("dense_expm: matrix must be square");
  }
  if (static_cast<std::size_t>(A.rows()) > cap) {
    throw OracleCapError("dense_expm: dimension " + std::to_string(A.rows()) +
                         " exceeds oracle cap " + std::to_string(cap));
  }
  const auto n = A.rows();
  if (n == 0) return Eigen::MatrixXd(0, 0);

  Eigen::MatrixXd B = A * t;
  const double norm = mat_l1_norm(B);
  Eigen::MatrixXd U(n, n), V(n, n);
  int squarings = 0;
  if (norm < 1.495585217958292e-2) {
    pade3(B, U, V);
  } else if (norm < 2.539398330063230e-1) {
    pade5(B, U, V);
  } else if (norm < 9.504178996162932e-1) {
    pade7(B, U, V);
  } else if (norm < 2.097847961257068e0) {
    pade9(B, U, V);
  } else {
    const double theta13 = 5.371920351148152;
    if (norm > theta13) {
      squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    }
    B *= std::ldexp(1.0, -squarings);
    pade13(B, U, V);
  }
  Eigen::MatrixXd numer = V + U;
  Eigen::MatrixXd denom = V - U;
  Eigen::MatrixXd R = denom.partialPivLu().solve(numer);
  for (int i = 0; i < squarings; ++i) R = R * R;
  return R;
}

namespace {

struct ArnoldiBasis {
  Eigen::MatrixXd V;  // n x (m+1) orthonormal columns
  Eigen::MatrixXd H;  // (m+2) x (m+2), augmented
  int m_used = 0;
  bool happy = false;
  double beta = 0.0;  // l2 norm of the start vector
};

// Arnoldi with modified Gram-Schmidt and one reorthogonalization pass.
ArnoldiBasis build_arnoldi(const SparseGenerator& A, const std::vector<double>& w, int m,
                           double anorm) {
  const auto n = static_cast<Eigen::Index>(w.size());
  ArnoldiBasis basis;
  basis.V.resize(n, m + 1);
  basis.H = Eigen::MatrixXd::Zero(m + 2, m + 2);
  basis.beta = 0.0;
  for (double x : w) basis.beta += x * x;
  basis.beta = std::sqrt(basis.beta);
  if (basis.beta == 0.0) return basis;

  for (Eigen::Index i = 0; i < n; ++i) basis.V(i, 0) = w[i] / basis.beta;

  const double breakdown_tol = 1e-14 * std::max(anorm, 1.0);
  Eigen::VectorXd p(n);
  basis.m_used = m;
  const auto un = static_cast<std::size_t>(n);
  for (int j = 0; j < m; ++j) {
    A.apply(std::span<const double>(basis.V.col(j).data(), un),
            std::span<double>(p.data(), un));
    for (int i = 0; i <= j; ++i) {
      const double h = basis.V.col(i).dot(p);
      p -= h * basis.V.col(i);
      basis.H(i, j) += h;
    }
    for (int i = 0; i <= j; ++i) {  // second pass
      const double h = basis.V.col(i).dot(p);
      p -= h * basis.V.col(i);
      basis.H(i, j) += h;
    }
    const double hnext = p.norm();
    if (hnext <= breakdown_tol) {
      basis.happy = true;
      basis.m_used = j + 1;
      return basis;
    }
    basis.H(j + 1, j) = hnext;
    basis.V.col(j + 1) = p / hnext;
  }
  basis.H(m + 1, m) = 1.0;  // phi-function augmentation
  return basis;
}

}  // namespace

std::pair<std::vector<double>, ExpmvReport> expmv(const SparseGenerator& A,
                                                  std::span<const double> v, double t,
                                                  const ExpmvOptions& opts) {
  if (A.dimension() != v.size()) {
    throw InvalidArgumentError("expmv: dimension mismatch");
  }
  if (!(t >= 0.0)) {
    throw InvalidArgumentError("expmv: t must be nonnegative");
  }
  if (!(opts.tolerance > 0.0) || opts.tolerance >= 1.0) {
    throw InvalidArgumentError("expmv: tolerance must be in (0, 1)");
  }
  if (opts.max_krylov_dim < 2) {
    throw InvalidArgumentError("expmv: max_krylov_dim must be >= 2");
  }

  std::vector<double> w(v.begin(), v.end());
  ExpmvReport report;
  const std::size_t n = A.dimension();
  const double vl1 = l1_norm(v);
  if (t == 0.0 || n == 0 || vl1 == 0.0) return {std::move(w), report};
  const double anorm = A.one_norm();
  if (anorm == 0.0) return {std::move(w), report};

  // Per-substep budget is the total l1 budget prorated by tau/t, with a
  // safety factor so that accumulated true error stays inside the target.
  const double budget_total = opts.tolerance * vl1;
  const double safety = 0.2;
  const double gamma = 0.9;

  int m = std::clamp(opts.start_krylov_dim, 2, opts.max_krylov_dim);
  m = static_cast<int>(std::min<std::size_t>(m, n));

  // EXPOKIT-style first step-size guess.
  auto initial_tau = [&](int mdim) {
    const double xm = 1.0 / mdim;
    double fact = std::pow((mdim + 1) / std::exp(1.0), mdim + 1) *
                  std::sqrt(2.0 * M_PI * (mdim + 1));
    double guess = (1.0 / anorm) *
                   std::pow(fact * safety * opts.tolerance / (4.0 * anorm * t), xm);
    return std::clamp(guess, t * 1e-12, t);
  };
  double tau = initial_tau(m);

  double t_done = 0.0;
  double est_accum = 0.0;

  while (t_done < t) {
    if (report.substeps >= opts.max_substeps) {
      throw ExpmvFailure("expmv: substep budget exhausted at t = " + std::to_string(t_done) +
                             " of " + std::to_string(t),
                         w, est_accum + std::expm1(anorm * (t - t_done)) * l1_norm(w));
    }
    tau = std::min(tau, t - t_done);

    ArnoldiBasis basis = build_arnoldi(A, w, m, anorm);
    if (basis.beta == 0.0) break;  // w = 0 is a fixed point
    report.krylov_dim = basis.m_used;

    if (basis.happy) {
      // Invariant subspace: the projected exponential is exact for any step,
      // so finish the remaining time in one go.
      tau = t - t_done;
      const int mu = basis.m_used;
      Eigen::MatrixXd F = expm_taylor_small(tau * basis.H.topLeftCorner(mu, mu));
      Eigen::VectorXd y = basis.beta * (basis.V.leftCols(mu) * F.col(0));
      std::copy(y.data(), y.data() + y.size(), w.begin());
      ++report.substeps;
      t_done = t;
      break;
    }

    const int mu = basis.m_used;  // == m here
    Eigen::VectorXd av(static_cast<Eigen::Index>(n));
    A.apply(std::span<const double>(basis.V.col(mu).data(), n),
            std::span<double>(av.data(), n));
    const double vnext_l1 = l1_norm({basis.V.col(mu).data(), n});
    const double av_l1 = l1_norm({av.data(), n});

    bool accepted = false;
    for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
      Eigen::MatrixXd F = expm_taylor_small(tau * basis.H.topLeftCorner(mu + 2, mu + 2));
      const double err1 = std::abs(basis.beta * F(mu, 0)) * vnext_l1;
      const double err2 = std::abs(basis.beta * F(mu + 1, 0)) * av_l1;
      double err_loc;
      double xm;
      if (err1 > 10.0 * err2) {
        err_loc = err2;
        xm = 1.0 / mu;
      } else if (err1 > err2) {
        err_loc = (err1 * err2) / (err1 - err2);
        xm = 1.0 / mu;
      } else {
        err_loc = err1;
        xm = 1.0 / (mu - 1);
      }
      const double budget_tau = safety * budget_total * (tau / t);
      if (err_loc <= budget_tau) {
        // Corrected update: include the (m+1)-th basis vector.
        Eigen::VectorXd y =
            basis.beta * (basis.V.leftCols(mu + 1) * F.col(0).head(mu + 1));
        std::copy(y.data(), y.data() + y.size(), w.begin());
        t_done += tau;
        est_accum += err_loc;
        ++report.substeps;
        accepted = true;
        // Next step suggestion, growth capped.
        double tau_next = gamma * tau * std::pow(budget_tau / err_loc, xm);
        tau = std::clamp(tau_next, tau * 0.2, tau * 3.0);
        // Crawl detection: when many substeps still lie ahead, a larger
        // subspace takes far longer steps for the same budget (tau scales
        // like tol^(1/m)), and the basis is rebuilt each substep anyway.
        const double remaining = t - t_done;
        const int allowance = opts.max_substeps - report.substeps;
        const int threshold = std::min(50, std::max(1, allowance / 2));
        const int max_eff =
            static_cast<int>(std::min<std::size_t>(opts.max_krylov_dim, n));
        if (remaining > 0.0 && m < max_eff &&
            tau * static_cast<double>(threshold) < remaining) {
          m = std::min(max_eff, m + std::max(4, m / 2));
          tau = std::max(tau, initial_tau(m));
        }
      } else {
        double tau_new = gamma * tau * std::pow(budget_tau / err_loc, xm);
        tau = std::clamp(tau_new, tau * 0.1, tau * 0.9);
        if (tau < t * 1e-13) break;  // not converging at this dimension
      }
    }
    if (!accepted) {
      if (m < std::min<std::size_t>(opts.max_krylov_dim, n)) {
        m = static_cast<int>(std::min<std::size_t>(
            {static_cast<std::size_t>(opts.max_krylov_dim), n,
             static_cast<std::size_t>(m + std::max(4, m / 2))}));
        tau = initial_tau(m);
        continue;  // rebuild the basis at a larger dimension
      }
      throw ExpmvFailure("expmv: failed to meet tolerance at max Krylov dimension " +
                             std::to_string(m),
                         w, est_accum + std::expm1(anorm * (t - t_done)) * l1_norm(w));
    }
  }

  if (opts.clamp_negatives) {
    const double clamp_tol = opts.tolerance * vl1;
    for (double& x : w) {
      if (x < 0.0 && -x <= clamp_tol) x = 0.0;
    }
  }
  report.estimated_error = est_accum;
  return {std::move(w), report};
}

}  // namespace cmefsp
