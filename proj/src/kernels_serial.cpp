#include "multifuse/kernels.hpp"

namespace multifuse::kernels::serial {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < p; ++k) {
        const double diff = x(i, k) - x(j, k);
        acc += diff * diff;
      }
      d(i, j) = acc;
      d(j, i) = acc;
    }
  }
  return d;
}

Eigen::MatrixXd frobenius_gram(std::span<const Eigen::MatrixXd> mats) {
  const auto m = static_cast<Eigen::Index>(mats.size());
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a; b < m; ++b) {
      const Eigen::MatrixXd& x = mats[a];
      const Eigen::MatrixXd& y = mats[b];
      double acc = 0.0;
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (Eigen::Index i = 0; i < x.rows(); ++i) acc += x(i, j) * y(i, j);
      }
      g(a, b) = acc;
      g(b, a) = acc;
    }
  }
  return g;
}

std::vector<Eigen::MatrixXd> cdp_update(std::span<const Eigen::MatrixXd> p,
                                        std::span<const Eigen::MatrixXd> q) {
  const std::size_t m = p.size();
  const Eigen::Index n = p.front().rows();
  std::vector<Eigen::MatrixXd> out;
  out.reserve(m);
  for (std::size_t l = 0; l < m; ++l) {
    Eigen::MatrixXd others = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t h = 0; h < m; ++h) {
      if (h == l) continue;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) others(i, j) += p[h](i, j);
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) others(i, j) /= static_cast<double>(m - 1);
    }
    const Eigen::MatrixXd& ql = q[l];
    Eigen::MatrixXd left = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) acc += ql(i, k) * others(k, j);
        left(i, j) = acc;
      }
    }
    Eigen::MatrixXd next(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) acc += left(i, k) * ql(j, k);
        next(i, j) = acc;
      }
    }
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace multifuse::kernels::serial
