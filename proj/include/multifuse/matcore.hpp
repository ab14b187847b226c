#pragma once

#include <Eigen/Dense>

#include "multifuse/error.hpp"

namespace multifuse {

/// Dense real symmetric matrix. The input is symmetrized once, at
/// construction, as (M + M^T) / 2, so entries(i, j) == entries(j, i) holds
/// bit-exactly for the lifetime of the value.
class SymMatrix {
 public:
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix identity(Eigen::Index n);
  static SymMatrix zeros(Eigen::Index n);
  static SymMatrix diagonal(const Eigen::VectorXd& d);

  Eigen::Index size() const noexcept { return m_.rows(); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  double trace() const { return m_.trace(); }
  double frobenius_norm() const { return m_.norm(); }
  bool all_finite() const { return m_.allFinite(); }

 private:
  Eigen::MatrixXd m_;
};

/// Eigenvalues in nonincreasing order; columns of `vectors` are the matching
/// unit eigenvectors, each with its first nonzero component positive.
struct EigenPair {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

EigenPair sym_eigen(const SymMatrix& m);

enum class MatFn { Sqrt, InvSqrt, Log, Exp };

/// Eigenvalue threshold below which log / inverse square root are refused:
/// 1e-12 * max(1, trace(M) / n).
double eig_floor(const SymMatrix& m);

/// Applies `f` to the spectrum of `m`. Eigenvalues in [-tol, 0) are clipped to
/// zero for Sqrt (tol scales with the spectral radius); Log and InvSqrt throw
/// SingularMatrix when the smallest eigenvalue is below eig_floor(m).
SymMatrix mat_fn(const SymMatrix& m, MatFn f);
SymMatrix mat_fn(const SymMatrix& m, const EigenPair& eig, MatFn f);

double frobenius_inner(const SymMatrix& x, const SymMatrix& y);

bool is_psd(const SymMatrix& m, double tol);

double min_eigenvalue(const SymMatrix& m);

}  // namespace multifuse
