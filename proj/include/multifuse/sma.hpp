#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "multifuse/multiplex.hpp"

namespace multifuse {

/// Pairwise RV coefficients between layers. Symmetric with a unit diagonal.
class RvMatrix {
 public:
  explicit RvMatrix(Eigen::MatrixXd r);

  const Eigen::MatrixXd& matrix() const noexcept { return r_; }
  Eigen::Index size() const noexcept { return r_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return r_(i, j); }

 private:
  Eigen::MatrixXd r_;
};

/// Nonnegative layer weights summing to one (within 1e-12).
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> w);

  static WeightVector uniform(std::size_t m);

  const std::vector<double>& values() const noexcept { return w_; }
  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t l) const { return w_[l]; }

 private:
  std::vector<double> w_;
};

enum class BarycenterMetric { Frobenius, Riemannian, Wasserstein };

std::string_view to_string(BarycenterMetric metric) noexcept;

struct BarycenterConfig {
  BarycenterMetric metric = BarycenterMetric::Riemannian;
  double tol = 1e-10;
  int max_iter = 1000;
  /// Relative diagonal shift (jitter * trace / n) applied to layers whose
  /// smallest eigenvalue falls below eig_floor. Zero disables it.
  double jitter = 0.0;

  /// jitter = 1e-8 for Riemannian, 0 otherwise.
  static BarycenterConfig defaults_for(BarycenterMetric metric);
  void validate() const;
};

RvMatrix rv_matrix(std::span<const SymMatrix> layers);
RvMatrix rv_matrix(const Multiplex& layers);

/// Leading eigenvector of R scaled to sum to one.
WeightVector weights_frobenius(const RvMatrix& r);

/// (R - I) 1 scaled to sum to one.
WeightVector weights_rowsum(const RvMatrix& r);

FusionResult barycenter_frobenius(std::span<const SymMatrix> layers, const WeightVector& w);

/// Weighted Karcher mean: fixed point of
/// X <- X^{1/2} exp(sum_l w_l log(X^{-1/2} S_l X^{-1/2})) X^{1/2}, started at
/// the arithmetic mean, stopped when the gradient norm is at most tol * m.
FusionResult barycenter_riemannian(std::span<const SymMatrix> layers, const WeightVector& w,
                                   const BarycenterConfig& cfg);

/// Bures-Wasserstein barycenter: fixed point of
/// X <- X^{-1/2} (sum_l w_l (X^{1/2} S_l X^{1/2})^{1/2})^2 X^{-1/2}, started at
/// the arithmetic mean, stopped when
/// ||X - sum_l w_l (X^{1/2} S_l X^{1/2})^{1/2}||_F <= tol * max(1, ||X||_F).
FusionResult barycenter_wasserstein(std::span<const SymMatrix> layers, const WeightVector& w,
                                    const BarycenterConfig& cfg);

/// Dispatches on cfg.metric.
FusionResult barycenter(std::span<const SymMatrix> layers, const WeightVector& w,
                        const BarycenterConfig& cfg);

/// Same solvers on the layers of a multiplex; the result carries its labels.
FusionResult barycenter(const Multiplex& layers, const WeightVector& w, const BarycenterConfig& cfg);

std::vector<SymMatrix> layer_matrices(const Multiplex& layers);

}  // namespace multifuse
