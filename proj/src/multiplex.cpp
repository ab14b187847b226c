#include "multifuse/multiplex.hpp"

#include <algorithm>

namespace multifuse {

Multiplex::Multiplex(std::vector<SimilarityLayer> layers, std::vector<std::string> names)
    : layers_(std::move(layers)), names_(std::move(names)) {
  if (layers_.empty()) throw Error(ErrorKind::InvalidInput, "multiplex needs at least one layer");
  if (names_.empty()) {
    for (std::size_t l = 0; l < layers_.size(); ++l) names_.push_back("layer" + std::to_string(l));
  }
  if (names_.size() != layers_.size()) {
    throw Error(ErrorKind::DimensionError, "multiplex layer names do not match layer count");
  }
  for (std::size_t l = 1; l < layers_.size(); ++l) {
    if (layers_[l].size() != layers_[0].size()) {
      throw Error(ErrorKind::DimensionError, "layer '" + names_[l] + "' has " +
                                                 std::to_string(layers_[l].size()) +
                                                 " nodes, expected " +
                                                 std::to_string(layers_[0].size()));
    }
    if (layers_[l].labels() != layers_[0].labels()) {
      throw Error(ErrorKind::InvalidInput, "layer '" + names_[l] + "' has different node labels");
    }
  }
}

std::vector<Eigen::MatrixXd> Multiplex::matrices() const {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(layers_.size());
  for (const auto& layer : layers_) out.push_back(layer.matrix());
  return out;
}

SimilarityLayer to_similarity_layer(const FusionResult& r, std::size_t* clipped,
                                    double* max_violation) {
  Eigen::MatrixXd s = r.matrix.matrix();
  std::size_t count = 0;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      const double v = s(i, j);
      const double c = std::clamp(v, 0.0, 1.0);
      if (c != v) {
        ++count;
        worst = std::max(worst, std::abs(v - c));
        s(i, j) = c;
      }
    }
  }
  if (clipped) *clipped = count;
  if (max_violation) *max_violation = worst;
  return SimilarityLayer(r.labels, SymMatrix(s), SimilarityKind::External);
}

}  // namespace multifuse
