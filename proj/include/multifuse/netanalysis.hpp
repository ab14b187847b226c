#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "multifuse/simbuild.hpp"

namespace multifuse {

/// Community assignment, 0-based and contiguous, numbered in order of first
/// appearance along the node list.
struct Partition {
  Labels labels;
  std::vector<int> community;
  double modularity = 0.0;

  int count() const;
};

/// Symmetric table of pairwise distance correlations between named networks.
struct CorrelationTable {
  std::vector<std::string> names;
  Eigen::MatrixXd values;
};

/// Distance correlation of two networks, each node's row of similarities being
/// one sample point: Euclidean distances between rows, double centering, then
/// dCor = dCov / sqrt(dVar_a dVar_b). Returns 0 when either dVar is 0.
double distance_correlation(const SimilarityLayer& a, const SimilarityLayer& b);
double distance_correlation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Double-centered Euclidean distance matrix of the rows of `x`.
Eigen::MatrixXd centered_row_distances(const Eigen::MatrixXd& x);

CorrelationTable correlation_table(const std::vector<std::string>& names,
                                   const std::vector<SimilarityLayer>& layers);

/// Weighted modularity with resolution gamma on the off-diagonal part of `s`:
/// Q = sum_c [ in_c / 2W - gamma (tot_c / 2W)^2 ]. Zero when the graph has no
/// off-diagonal weight.
double modularity(const Eigen::MatrixXd& s, std::span<const int> community, double resolution);
double modularity(const SimilarityLayer& s, const Partition& p, double resolution);

/// Louvain modularity optimization (local moves, then aggregation, repeated
/// while the gain exceeds 1e-12). Self-similarities on the diagonal are
/// ignored. Node sweep order comes from a seeded mt19937_64 shuffle, so a
/// fixed seed gives the same partition on every platform.
Partition louvain_communities(const SimilarityLayer& s, double resolution = 1.0,
                              std::uint64_t seed = 0);

}  // namespace multifuse
