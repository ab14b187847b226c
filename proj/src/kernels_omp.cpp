#include "multifuse/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace multifuse::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  // Row i owns entries (i, j>i) and their mirrors, so no two threads write
  // the same location.
#pragma omp parallel for schedule(dynamic, 4)
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
  const Eigen::Index pairs = m * (m + 1) / 2;
#pragma omp parallel for schedule(dynamic, 1)
  for (Eigen::Index idx = 0; idx < pairs; ++idx) {
    Eigen::Index a = 0;
    Eigen::Index rem = idx;
    while (rem >= m - a) {
      rem -= m - a;
      ++a;
    }
    const Eigen::Index b = a + rem;
    const Eigen::MatrixXd& x = mats[a];
    const Eigen::MatrixXd& y = mats[b];
    double acc = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      for (Eigen::Index i = 0; i < x.rows(); ++i) acc += x(i, j) * y(i, j);
    }
    g(a, b) = acc;
    g(b, a) = acc;
  }
  return g;
}

namespace {

// Nonzero columns of each kernel row, largest weight first, ties by index.
// Summing in this order makes the update equivariant under node relabelling
// down to the last bit, because it does not depend on node numbering.
std::vector<std::vector<Eigen::Index>> support(const Eigen::MatrixXd& q) {
  std::vector<std::vector<Eigen::Index>> rows(static_cast<std::size_t>(q.rows()));
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    auto& r = rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      if (q(i, j) != 0.0) r.push_back(j);
    }
    std::sort(r.begin(), r.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (q(i, a) != q(i, b)) return q(i, a) > q(i, b);
      return a < b;
    });
  }
  return rows;
}

}  // namespace

std::vector<Eigen::MatrixXd> cdp_update(std::span<const Eigen::MatrixXd> p,
                                        std::span<const Eigen::MatrixXd> q) {
  const std::size_t m = p.size();
  const Eigen::Index n = p.front().rows();
  std::vector<Eigen::MatrixXd> out(m);
  for (std::size_t l = 0; l < m; ++l) {
    Eigen::MatrixXd others = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t h = 0; h < m; ++h) {
      if (h != l) others += p[h];
    }
    others /= static_cast<double>(m - 1);
    const Eigen::MatrixXd& ql = q[l];
    const auto nbrs = support(ql);

    Eigen::MatrixXd left(n, n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index b = 0; b < n; ++b) {
        double acc = 0.0;
        for (Eigen::Index a : nbrs[static_cast<std::size_t>(i)]) acc += ql(i, a) * others(a, b);
        left(i, b) = acc;
      }
    }
    Eigen::MatrixXd next(n, n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        double acc = 0.0;
        for (Eigen::Index b : nbrs[static_cast<std::size_t>(j)]) acc += left(i, b) * ql(j, b);
        next(i, j) = acc;
      }
    }
    out[l] = std::move(next);
  }
  return out;
}

}  // namespace omp
}  // namespace multifuse::kernels
