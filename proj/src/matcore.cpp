#include "multifuse/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace multifuse {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DimensionError: return "DimensionError";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::DegenerateGroup: return "DegenerateGroup";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyTable: return "EmptyTable";
    case ErrorKind::EmptyAfterFilter: return "EmptyAfterFilter";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionError, "matrix is " + std::to_string(m.rows()) + "x" +
                                               std::to_string(m.cols()) + ", expected square");
  }
  if (m.rows() < 1) throw Error(ErrorKind::DimensionError, "matrix must have n >= 1");
  m_ = (m + m.transpose()) * 0.5;
}

SymMatrix SymMatrix::identity(Eigen::Index n) {
  return SymMatrix(Eigen::MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::zeros(Eigen::Index n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

EigenPair sym_eigen(const SymMatrix& m) {
  if (!m.all_finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
  const Eigen::Index n = m.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidInput, "symmetric eigensolver did not converge");
  }
  // Eigen reports ascending order.
  EigenPair out{solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
  for (Eigen::Index c = 0; c < n; ++c) {
    auto col = out.vectors.col(c);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(col(r)) > 1e-14) {
        if (col(r) < 0) col = -col;
        break;
      }
    }
  }
  return out;
}

double eig_floor(const SymMatrix& m) {
  return 1e-12 * std::max(1.0, m.trace() / static_cast<double>(m.size()));
}

SymMatrix mat_fn(const SymMatrix& m, MatFn f) { return mat_fn(m, sym_eigen(m), f); }

SymMatrix mat_fn(const SymMatrix& m, const EigenPair& eig, MatFn f) {
  const Eigen::Index n = m.size();
  Eigen::VectorXd mapped(n);
  const double lo = eig.values(n - 1);
  switch (f) {
    case MatFn::Sqrt: {
      const double radius = std::max(std::abs(eig.values(0)), std::abs(lo));
      const double tol_psd = 1e-10 * std::max(1.0, radius);
      if (lo < -tol_psd) {
        throw Error(ErrorKind::InvalidInput,
                    "square root of a matrix with eigenvalue " + std::to_string(lo));
      }
      for (Eigen::Index i = 0; i < n; ++i) mapped(i) = std::sqrt(std::max(0.0, eig.values(i)));
      break;
    }
    case MatFn::InvSqrt:
    case MatFn::Log: {
      if (lo < eig_floor(m)) {
        throw Error(ErrorKind::SingularMatrix,
                    "smallest eigenvalue " + std::to_string(lo) + " below floor");
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        mapped(i) = f == MatFn::Log ? std::log(eig.values(i)) : 1.0 / std::sqrt(eig.values(i));
      }
      break;
    }
    case MatFn::Exp:
      for (Eigen::Index i = 0; i < n; ++i) mapped(i) = std::exp(eig.values(i));
      break;
  }
  const Eigen::MatrixXd scaled = eig.vectors * mapped.asDiagonal();
  return SymMatrix(scaled * eig.vectors.transpose());
}

double frobenius_inner(const SymMatrix& x, const SymMatrix& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::DimensionError, "Frobenius inner product of " +
                                               std::to_string(x.size()) + "x" +
                                               std::to_string(x.size()) + " and " +
                                               std::to_string(y.size()) + "x" +
                                               std::to_string(y.size()));
  }
  return x.matrix().cwiseProduct(y.matrix()).sum();
}

double min_eigenvalue(const SymMatrix& m) {
  if (!m.all_finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool is_psd(const SymMatrix& m, double tol) {
  if (!(tol >= 0)) throw Error(ErrorKind::InvalidInput, "tolerance must be nonnegative");
  return min_eigenvalue(m) >= -tol;
}

}  // namespace multifuse
