#include <algorithm>
#include <cmath>

#include "multifuse/kernels.hpp"
#include "multifuse/netanalysis.hpp"

namespace multifuse {

Eigen::MatrixXd centered_row_distances(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd d = kernels::omp::squared_distances(x).cwiseSqrt();
  const Eigen::VectorXd row_mean = d.rowwise().mean();
  const Eigen::RowVectorXd col_mean = d.colwise().mean();
  const double grand = d.mean();
  d.colwise() -= row_mean;
  d.rowwise() -= col_mean;
  d.array() += grand;
  return d;
}

double distance_correlation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionError, "distance correlation of " +
                                               std::to_string(a.rows()) + "-node and " +
                                               std::to_string(b.rows()) + "-node networks");
  }
  if (a.rows() < 2) throw Error(ErrorKind::InvalidInput, "distance correlation needs n >= 2");
  const Eigen::MatrixXd ca = centered_row_distances(a);
  const Eigen::MatrixXd cb = centered_row_distances(b);
  const double cov = ca.cwiseProduct(cb).mean();
  const double var_a = ca.cwiseProduct(ca).mean();
  const double var_b = cb.cwiseProduct(cb).mean();
  if (!(var_a > 0.0) || !(var_b > 0.0)) return 0.0;
  const double r2 = cov / std::sqrt(var_a * var_b);
  return std::sqrt(std::clamp(r2, 0.0, 1.0));
}

double distance_correlation(const SimilarityLayer& a, const SimilarityLayer& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionError, "distance correlation of " + std::to_string(a.size()) +
                                               "-node and " + std::to_string(b.size()) +
                                               "-node networks");
  }
  if (a.labels() != b.labels()) {
    throw Error(ErrorKind::InvalidInput, "distance correlation of networks with different labels");
  }
  return distance_correlation(a.matrix(), b.matrix());
}

CorrelationTable correlation_table(const std::vector<std::string>& names,
                                   const std::vector<SimilarityLayer>& layers) {
  if (names.size() != layers.size()) {
    throw Error(ErrorKind::DimensionError, "correlation table names do not match networks");
  }
  const auto m = static_cast<Eigen::Index>(layers.size());
  CorrelationTable table{names, Eigen::MatrixXd::Identity(m, m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double v = distance_correlation(layers[i], layers[j]);
      table.values(i, j) = v;
      table.values(j, i) = v;
    }
  }
  return table;
}

}  // namespace multifuse
