#include "multifuse/simbuild.hpp"

#include <algorithm>
#include <cmath>

#include "multifuse/kernels.hpp"

namespace multifuse {

Labels index_labels(Eigen::Index n) {
  Labels out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

std::string_view to_string(SimilarityKind kind) noexcept {
  switch (kind) {
    case SimilarityKind::Rbf: return "rbf";
    case SimilarityKind::Presence: return "presence";
    case SimilarityKind::Jaccard: return "jaccard";
    case SimilarityKind::Cosine: return "cosine";
    case SimilarityKind::External: return "external";
  }
  return "unknown";
}

SimilarityLayer::SimilarityLayer(Labels labels, SymMatrix s, SimilarityKind kind)
    : labels_(std::move(labels)), s_(std::move(s)), kind_(kind) {
  const Eigen::Index n = s_.size();
  if (static_cast<Eigen::Index>(labels_.size()) != n) {
    throw Error(ErrorKind::DimensionError, std::to_string(labels_.size()) + " labels for a " +
                                               std::to_string(n) + "-node similarity matrix");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = s_(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorKind::InvalidInput, "similarity entry (" + std::to_string(i) + ", " +
                                                 std::to_string(j) + ") = " + std::to_string(v) +
                                                 " outside [0, 1]");
      }
    }
    if (kind_ != SimilarityKind::External && s_(i, i) != 1.0) {
      throw Error(ErrorKind::InvalidInput,
                  "diagonal entry " + std::to_string(i) + " of a " +
                      std::string(to_string(kind_)) + " layer is not 1");
    }
  }
}

FeatureTable::FeatureTable(Labels labels_in, Eigen::MatrixXd rows_in)
    : labels(std::move(labels_in)), rows(std::move(rows_in)) {
  if (static_cast<Eigen::Index>(labels.size()) != rows.rows()) {
    throw Error(ErrorKind::DimensionError, "feature table has " + std::to_string(labels.size()) +
                                               " labels but " + std::to_string(rows.rows()) +
                                               " rows");
  }
  if (rows.rows() < 1 || rows.cols() < 1) {
    throw Error(ErrorKind::InvalidInput, "feature table needs n >= 1 rows of dimension p >= 1");
  }
  if (!rows.allFinite()) throw Error(ErrorKind::InvalidInput, "feature table has non-finite values");
}

IncidenceMatrix::IncidenceMatrix(Labels items_in, Labels groups_in, Eigen::MatrixXd entries_in)
    : items(std::move(items_in)), groups(std::move(groups_in)), entries(std::move(entries_in)) {
  if (static_cast<Eigen::Index>(items.size()) != entries.rows() ||
      static_cast<Eigen::Index>(groups.size()) != entries.cols()) {
    throw Error(ErrorKind::DimensionError, "incidence labels do not match its shape");
  }
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < entries.cols(); ++j) {
      if (entries(i, j) != 0.0 && entries(i, j) != 1.0) {
        throw Error(ErrorKind::InvalidInput, "incidence entry (" + std::to_string(i) + ", " +
                                                 std::to_string(j) + ") is not binary");
      }
    }
  }
}

double default_sigma(const FeatureTable& t) {
  const Eigen::Index n = t.rows.rows();
  if (n < 2) return 1.0;
  const Eigen::MatrixXd d2 = kernels::omp::squared_distances(t.rows);
  const double mean = d2.sum() / static_cast<double>(n * (n - 1));
  return mean > 0.0 ? mean : 1.0;
}

SimilarityLayer rbf_similarity(const FeatureTable& t, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::InvalidParameter, "rbf sigma must be a positive finite number");
  }
  Eigen::MatrixXd s = (-kernels::omp::squared_distances(t.rows) / sigma).array().exp().matrix();
  s.diagonal().setOnes();
  return SimilarityLayer(t.labels, SymMatrix(s), SimilarityKind::Rbf);
}

SimilarityLayer rbf_similarity(const FeatureTable& t) { return rbf_similarity(t, default_sigma(t)); }

SimilarityLayer presence_similarity(const FeatureTable& t) {
  if (t.rows.cols() != 1) {
    throw Error(ErrorKind::InvalidInput, "presence similarity needs scalar observations");
  }
  const Eigen::Index n = t.rows.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = t.rows(i, 0);
    if (v != 0.0 && v != 1.0) {
      throw Error(ErrorKind::InvalidInput,
                  "presence observation for '" + t.labels[i] + "' is not 0 or 1");
    }
  }
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) s(i, j) = t.rows(i, 0) == t.rows(j, 0) ? 1.0 : 0.0;
  }
  return SimilarityLayer(t.labels, SymMatrix(s), SimilarityKind::Presence);
}

SymMatrix one_mode_projection(const IncidenceMatrix& b) {
  return SymMatrix(b.entries.transpose() * b.entries);
}

namespace {

template <typename Formula>
SimilarityLayer from_projection(const SymMatrix& g, Labels labels, SimilarityKind kind,
                                Formula formula) {
  const Eigen::Index n = g.size();
  if (labels.empty()) labels = index_labels(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(g(i, i) > 0.0)) {
      throw Error(ErrorKind::DegenerateGroup,
                  "group '" + labels[static_cast<std::size_t>(i)] + "' has no items");
    }
  }
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::clamp(formula(g(i, j), g(i, i), g(j, j)), 0.0, 1.0);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return SimilarityLayer(std::move(labels), SymMatrix(s), kind);
}

}  // namespace

SimilarityLayer jaccard_from_projection(const SymMatrix& g, Labels labels) {
  return from_projection(g, std::move(labels), SimilarityKind::Jaccard,
                         [](double gij, double gii, double gjj) { return gij / (gii + gjj - gij); });
}

SimilarityLayer cosine_from_projection(const SymMatrix& g, Labels labels) {
  return from_projection(g, std::move(labels), SimilarityKind::Cosine,
                         [](double gij, double gii, double gjj) { return gij / std::sqrt(gii * gjj); });
}

}  // namespace multifuse
