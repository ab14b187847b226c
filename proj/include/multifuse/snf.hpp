#pragma once

#include <vector>

#include <Eigen/Dense>

#include "multifuse/multiplex.hpp"

namespace multifuse {

/// How the initial status matrices are normalized. Global divides every entry
/// by the sum of all entries of the layer. Row divides each row by its own sum
/// (the convention of other SNF implementations); it is never the default.
enum class StatusNormalization { Global, Row };

struct SnfConfig {
  int k = 1;
  double epsilon = 1e-6;
  int max_iter = 100;
  StatusNormalization normalization = StatusNormalization::Global;

  /// k = max(1, round(n / 3)), clamped to n - 1.
  static SnfConfig defaults_for(Eigen::Index n);
  void validate(Eigen::Index n) const;
};

/// Cross-diffusion state: current status matrices P, fixed local kernels Q,
/// the step counter and per-step, per-layer residuals ||P_{t+1} - P_t||_F.
struct StatusMatrices {
  std::vector<Eigen::MatrixXd> p;
  std::vector<Eigen::MatrixXd> q;
  int t = 0;
  std::vector<std::vector<double>> residuals;
};

Eigen::MatrixXd global_normalize(const SimilarityLayer& s);
Eigen::MatrixXd row_normalize(const SimilarityLayer& s);

struct LocalKernel {
  Eigen::MatrixXd q;
  /// Rows whose k neighbour similarities were all zero; those rows of q are zero.
  std::vector<Eigen::Index> zero_rows;
};

/// Indices of the k most similar nodes to `i` (self excluded), most similar
/// first; ties go to the smaller index.
std::vector<Eigen::Index> nearest_neighbours(const Eigen::MatrixXd& s, Eigen::Index i, int k);

LocalKernel local_normalize(const SimilarityLayer& s, int k);

/// One simultaneous update of every layer from the t-snapshot:
/// P_l <- Q_l * mean_{h != l}(P_h) * Q_l^T, then symmetrized.
StatusMatrices cdp_step(const StatusMatrices& state);

/// Divides by the largest off-diagonal entry, clips to [0, 1] and sets the
/// diagonal to one.
SymMatrix reweight_status_average(const Eigen::MatrixXd& average);

/// Normalizes, diffuses until max_l ||P_{l,t+1} - P_{l,t}||_F < epsilon (or
/// max_iter steps), averages the P_{l,T} and re-weights into a similarity
/// matrix. Non-convergence is reported through `converged`, not thrown.
FusionResult snf_fuse(const Multiplex& layers, const SnfConfig& cfg);

}  // namespace multifuse
