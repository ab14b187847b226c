#pragma once

// Data-parallel inner loops shared by the similarity builders, the fusion
// solvers and the distance correlation. Every kernel has an OpenMP version
// (used by the library) and a plain serial reference kept for tests and the
// benchmark. Parallel loops only partition independent output entries; each
// entry is accumulated in the same order as in the reference, so the two
// agree bit-for-bit where noted.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace multifuse::kernels {

namespace serial {

/// D(i, j) = sum_k (x_ik - x_jk)^2 over the rows of `x`. Bit-identical to
/// omp::squared_distances.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x);

/// G(a, b) = <M_a, M_b>_F. Bit-identical to omp::frobenius_gram.
Eigen::MatrixXd frobenius_gram(std::span<const Eigen::MatrixXd> mats);

/// out_l = Q_l * mean_{h != l}(P_h) * Q_l^T, written with explicit loops
/// straight from the update rule. Agrees with omp::cdp_update to rounding.
std::vector<Eigen::MatrixXd> cdp_update(std::span<const Eigen::MatrixXd> p,
                                        std::span<const Eigen::MatrixXd> q);

}  // namespace serial

namespace omp {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x);
Eigen::MatrixXd frobenius_gram(std::span<const Eigen::MatrixXd> mats);
std::vector<Eigen::MatrixXd> cdp_update(std::span<const Eigen::MatrixXd> p,
                                        std::span<const Eigen::MatrixXd> q);

}  // namespace omp

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace multifuse::kernels
