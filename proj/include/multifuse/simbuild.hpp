#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "multifuse/matcore.hpp"

namespace multifuse {

using Labels = std::vector<std::string>;

/// "0", "1", ... for callers that have no entity names.
Labels index_labels(Eigen::Index n);

enum class SimilarityKind { Rbf, Presence, Jaccard, Cosine, External };

std::string_view to_string(SimilarityKind kind) noexcept;

/// Symmetric similarity matrix with entries in [0, 1] and its node labels.
/// Construction kinds other than External also guarantee a unit diagonal.
class SimilarityLayer {
 public:
  SimilarityLayer(Labels labels, SymMatrix s, SimilarityKind kind);

  const Labels& labels() const noexcept { return labels_; }
  const SymMatrix& sym() const noexcept { return s_; }
  const Eigen::MatrixXd& matrix() const noexcept { return s_.matrix(); }
  SimilarityKind kind() const noexcept { return kind_; }
  Eigen::Index size() const noexcept { return s_.size(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return s_(i, j); }

 private:
  Labels labels_;
  SymMatrix s_;
  SimilarityKind kind_;
};

/// One observation vector (row) per entity; rows may be multivariate.
struct FeatureTable {
  FeatureTable(Labels labels, Eigen::MatrixXd rows);

  Labels labels;
  Eigen::MatrixXd rows;
};

/// p items x n groups, binary.
struct IncidenceMatrix {
  IncidenceMatrix(Labels items, Labels groups, Eigen::MatrixXd entries);

  Labels items;
  Labels groups;
  Eigen::MatrixXd entries;
};

/// Mean squared Euclidean distance over all ordered pairs i != j; 1 when the
/// table has fewer than two rows or all rows coincide.
double default_sigma(const FeatureTable& t);

/// s_ij = exp(-||x_i - x_j||^2 / sigma).
SimilarityLayer rbf_similarity(const FeatureTable& t, double sigma);
SimilarityLayer rbf_similarity(const FeatureTable& t);

/// s_ij = 1 when x_i == x_j, else 0. Rows must be scalar and binary.
SimilarityLayer presence_similarity(const FeatureTable& t);

/// G = B^T B: co-membership counts between groups.
SymMatrix one_mode_projection(const IncidenceMatrix& b);

/// g_ij / (g_ii + g_jj - g_ij). Throws DegenerateGroup when some g_ii == 0.
SimilarityLayer jaccard_from_projection(const SymMatrix& g, Labels labels = {});

/// g_ij / sqrt(g_ii g_jj). Throws DegenerateGroup when some g_ii == 0.
SimilarityLayer cosine_from_projection(const SymMatrix& g, Labels labels = {});

}  // namespace multifuse
