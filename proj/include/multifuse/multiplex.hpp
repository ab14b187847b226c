#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "multifuse/simbuild.hpp"

namespace multifuse {

/// Ordered similarity layers over one shared node-label list.
class Multiplex {
 public:
  /// `names` defaults to "layer0", "layer1", ...
  explicit Multiplex(std::vector<SimilarityLayer> layers, std::vector<std::string> names = {});

  const Labels& labels() const noexcept { return layers_.front().labels(); }
  const std::vector<SimilarityLayer>& layers() const noexcept { return layers_; }
  const SimilarityLayer& layer(std::size_t l) const { return layers_.at(l); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return layers_.size(); }
  Eigen::Index nodes() const noexcept { return layers_.front().size(); }

  std::vector<Eigen::MatrixXd> matrices() const;

 private:
  std::vector<SimilarityLayer> layers_;
  std::vector<std::string> names_;
};

/// Monoplex produced by one integration method plus solver diagnostics.
struct FusionResult {
  std::string method;
  Labels labels;
  SymMatrix matrix;
  std::vector<double> weights{};
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
  std::vector<double> residual_history{};
  /// Layers that received a diagonal shift before a Riemannian/Wasserstein solve.
  std::vector<std::size_t> jittered_layers{};
  /// SNF: rows whose neighbour similarities were all zero (left as zero rows).
  std::vector<Eigen::Index> zero_rows{};
};

/// Monoplex as a similarity layer. Entries outside [0, 1] (possible for the
/// Riemannian barycenter, whose entries are not guaranteed nonnegative) are
/// clipped; the number of clipped entries and the largest violation are
/// reported through the optional out-parameters.
SimilarityLayer to_similarity_layer(const FusionResult& r, std::size_t* clipped = nullptr,
                                    double* max_violation = nullptr);

}  // namespace multifuse
