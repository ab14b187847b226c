#include "multifuse/sma.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>

#include "multifuse/kernels.hpp"

namespace multifuse {

namespace {

constexpr double kWeightSumTol = 1e-12;

/// Evaluates term(l) for every layer in parallel and sums the results in layer
/// order, so the total does not depend on the thread count.
template <typename Term>
Eigen::MatrixXd weighted_layer_sum(std::size_t m, Eigen::Index n, const WeightVector& w,
                                   Term term) {
  std::vector<Eigen::MatrixXd> terms(m);
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(m); ++l) {
    try {
      terms[l] = term(static_cast<std::size_t>(l));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t l = 0; l < m; ++l) total += w[l] * terms[l];
  return total;
}

void check_layers(std::span<const SymMatrix> layers, const WeightVector& w) {
  if (layers.empty()) throw Error(ErrorKind::InvalidInput, "barycenter of zero layers");
  if (w.size() != layers.size()) {
    throw Error(ErrorKind::DimensionError, std::to_string(w.size()) + " weights for " +
                                               std::to_string(layers.size()) + " layers");
  }
  for (const auto& s : layers) {
    if (s.size() != layers.front().size()) {
      throw Error(ErrorKind::DimensionError, "layers have different dimensions");
    }
    if (!s.all_finite()) throw Error(ErrorKind::InvalidInput, "layer has non-finite entries");
  }
}

/// Copies the layers, shifting the rank-deficient ones when jitter > 0.
std::vector<SymMatrix> regularize(std::span<const SymMatrix> layers, double jitter,
                                  bool require_pd, std::vector<std::size_t>& jittered) {
  std::vector<SymMatrix> out;
  out.reserve(layers.size());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const SymMatrix& s = layers[l];
    const Eigen::Index n = s.size();
    const double lo = min_eigenvalue(s);
    const double floor = eig_floor(s);
    if (!require_pd) {
      const double tol = 1e-10 * std::max(1.0, s.frobenius_norm());
      if (lo < -tol) {
        throw Error(ErrorKind::InvalidInput, "layer " + std::to_string(l) +
                                                 " is not positive semidefinite (min eigenvalue " +
                                                 std::to_string(lo) + ")");
      }
    }
    if (lo < floor && jitter > 0.0) {
      const double shift = jitter * std::max(s.trace() / static_cast<double>(n), 1e-300);
      out.emplace_back(s.matrix() + shift * Eigen::MatrixXd::Identity(n, n));
      jittered.push_back(l);
    } else if (lo < floor && require_pd) {
      throw Error(ErrorKind::SingularMatrix,
                  "layer " + std::to_string(l) + " is not positive definite (min eigenvalue " +
                      std::to_string(lo) + ") and jitter is disabled");
    } else {
      out.push_back(s);
    }
  }
  return out;
}

Eigen::MatrixXd arithmetic_mean(std::span<const SymMatrix> layers, const WeightVector& w) {
  const Eigen::Index n = layers.front().size();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t l = 0; l < layers.size(); ++l) x += w[l] * layers[l].matrix();
  return x;
}

}  // namespace

RvMatrix::RvMatrix(Eigen::MatrixXd r) : r_(std::move(r)) {
  if (r_.rows() != r_.cols() || r_.rows() < 1) {
    throw Error(ErrorKind::DimensionError, "RV matrix must be square and nonempty");
  }
  if (!r_.allFinite()) throw Error(ErrorKind::InvalidInput, "RV matrix has non-finite entries");
  r_ = ((r_ + r_.transpose()) * 0.5).eval();
  r_.diagonal().setOnes();
}

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw Error(ErrorKind::InvalidInput, "weight vector is empty");
  double total = 0.0;
  for (double v : w_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidInput, "weight " + std::to_string(v) + " is negative or not finite");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    throw Error(ErrorKind::InvalidInput, "weights sum to " + std::to_string(total) + ", not 1");
  }
}

WeightVector WeightVector::uniform(std::size_t m) {
  return WeightVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

std::string_view to_string(BarycenterMetric metric) noexcept {
  switch (metric) {
    case BarycenterMetric::Frobenius: return "frobenius";
    case BarycenterMetric::Riemannian: return "riemannian";
    case BarycenterMetric::Wasserstein: return "wasserstein";
  }
  return "unknown";
}

BarycenterConfig BarycenterConfig::defaults_for(BarycenterMetric metric) {
  BarycenterConfig cfg;
  cfg.metric = metric;
  cfg.jitter = metric == BarycenterMetric::Riemannian ? 1e-8 : 0.0;
  return cfg;
}

void BarycenterConfig::validate() const {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "barycenter tol must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidParameter, "barycenter max_iter must be >= 1");
  if (!(jitter >= 0.0)) throw Error(ErrorKind::InvalidParameter, "jitter must be nonnegative");
}

RvMatrix rv_matrix(std::span<const SymMatrix> layers) {
  if (layers.size() < 2) throw Error(ErrorKind::InvalidInput, "RV matrix needs at least two layers");
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(layers.size());
  for (const auto& s : layers) {
    if (s.size() != layers.front().size()) {
      throw Error(ErrorKind::DimensionError, "layers have different dimensions");
    }
    mats.push_back(s.matrix());
  }
  const Eigen::MatrixXd gram = kernels::omp::frobenius_gram(mats);
  const auto m = static_cast<Eigen::Index>(layers.size());
  Eigen::VectorXd norms(m);
  for (Eigen::Index l = 0; l < m; ++l) {
    if (!(gram(l, l) > 0.0)) {
      throw Error(ErrorKind::InvalidInput, "layer " + std::to_string(l) + " is the zero matrix");
    }
    norms(l) = std::sqrt(gram(l, l));
  }
  Eigen::MatrixXd r(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) r(i, j) = gram(i, j) / (norms(i) * norms(j));
  }
  return RvMatrix(std::move(r));
}

RvMatrix rv_matrix(const Multiplex& layers) {
  const auto mats = layer_matrices(layers);
  return rv_matrix(std::span<const SymMatrix>(mats));
}

WeightVector weights_frobenius(const RvMatrix& r) {
  const Eigen::Index m = r.size();
  const EigenPair eig = sym_eigen(SymMatrix(r.matrix()));
  if (m > 1 && eig.values(0) - eig.values(1) <= 1e-10) {
    throw Error(ErrorKind::DegenerateSpectrum,
                "leading eigenvalue of the RV matrix is not simple (" +
                    std::to_string(eig.values(0)) + ", " + std::to_string(eig.values(1)) + ")");
  }
  Eigen::VectorXd q = eig.vectors.col(0);
  double total = q.sum();
  if (total < 0.0) {
    q = -q;
    total = -total;
  }
  if (!(total > 1e-12)) {
    throw Error(ErrorKind::InvalidInput, "leading eigenvector of the RV matrix sums to zero");
  }
  std::vector<double> w(static_cast<std::size_t>(m));
  for (Eigen::Index l = 0; l < m; ++l) {
    double v = q(l) / total;
    // Perron vectors of reducible R may carry rounding-level negative zeros.
    if (v < 0.0 && v > -1e-12) v = 0.0;
    w[static_cast<std::size_t>(l)] = v;
  }
  return WeightVector(std::move(w));
}

WeightVector weights_rowsum(const RvMatrix& r) {
  const Eigen::Index m = r.size();
  std::vector<double> rows(static_cast<std::size_t>(m), 0.0);
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j) rows[static_cast<std::size_t>(i)] += r(i, j);
    }
    total += rows[static_cast<std::size_t>(i)];
  }
  if (!(total > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "RV matrix has no positive off-diagonal mass");
  }
  for (double& v : rows) v /= total;
  return WeightVector(std::move(rows));
}

FusionResult barycenter_frobenius(std::span<const SymMatrix> layers, const WeightVector& w) {
  check_layers(layers, w);
  FusionResult result{.method = "sma-f",
                      .labels = index_labels(layers.front().size()),
                      .matrix = SymMatrix(arithmetic_mean(layers, w)),
                      .weights = w.values()};
  return result;
}

FusionResult barycenter_riemannian(std::span<const SymMatrix> layers, const WeightVector& w,
                                   const BarycenterConfig& cfg) {
  check_layers(layers, w);
  cfg.validate();
  const std::size_t m = layers.size();
  const Eigen::Index n = layers.front().size();
  FusionResult result{.method = "sma-r", .labels = index_labels(n), .matrix = SymMatrix::zeros(n),
                      .weights = w.values()};
  const std::vector<SymMatrix> spd = regularize(layers, cfg.jitter, true, result.jittered_layers);

  SymMatrix x(arithmetic_mean(spd, w));
  result.converged = false;
  for (int it = 0;; ++it) {
    const EigenPair eig = sym_eigen(x);
    const SymMatrix root = mat_fn(x, eig, MatFn::Sqrt);
    const SymMatrix inv_root = mat_fn(x, eig, MatFn::InvSqrt);
    const Eigen::MatrixXd gradient = weighted_layer_sum(m, n, w, [&](std::size_t l) {
      const SymMatrix whitened(inv_root.matrix() * spd[l].matrix() * inv_root.matrix());
      return mat_fn(whitened, MatFn::Log).matrix();
    });
    result.residual = gradient.norm();
    result.residual_history.push_back(result.residual);
    result.iterations = it;
    if (result.residual <= cfg.tol * static_cast<double>(m)) {
      result.converged = true;
      break;
    }
    if (it == cfg.max_iter) break;
    const SymMatrix step = mat_fn(SymMatrix(gradient), MatFn::Exp);
    x = SymMatrix(root.matrix() * step.matrix() * root.matrix());
  }
  result.matrix = x;
  return result;
}

FusionResult barycenter_wasserstein(std::span<const SymMatrix> layers, const WeightVector& w,
                                    const BarycenterConfig& cfg) {
  check_layers(layers, w);
  cfg.validate();
  const std::size_t m = layers.size();
  const Eigen::Index n = layers.front().size();
  FusionResult result{.method = "sma-w", .labels = index_labels(n), .matrix = SymMatrix::zeros(n),
                      .weights = w.values()};
  const std::vector<SymMatrix> psd = regularize(layers, cfg.jitter, false, result.jittered_layers);

  SymMatrix x(arithmetic_mean(psd, w));
  if (min_eigenvalue(x) < eig_floor(x)) {
    throw Error(ErrorKind::SingularMatrix,
                "weighted arithmetic mean is singular; no layer is positive definite");
  }
  result.converged = false;
  for (int it = 0;; ++it) {
    const EigenPair eig = sym_eigen(x);
    const SymMatrix root = mat_fn(x, eig, MatFn::Sqrt);
    const Eigen::MatrixXd mapped = weighted_layer_sum(m, n, w, [&](std::size_t l) {
      const SymMatrix inner(root.matrix() * psd[l].matrix() * root.matrix());
      return mat_fn(inner, MatFn::Sqrt).matrix();
    });
    result.residual = (x.matrix() - mapped).norm();
    result.residual_history.push_back(result.residual);
    result.iterations = it;
    if (result.residual <= cfg.tol * std::max(1.0, x.frobenius_norm())) {
      result.converged = true;
      break;
    }
    if (it == cfg.max_iter) break;
    const SymMatrix inv_root = mat_fn(x, eig, MatFn::InvSqrt);
    x = SymMatrix(inv_root.matrix() * mapped * mapped * inv_root.matrix());
  }
  result.matrix = x;
  return result;
}

FusionResult barycenter(std::span<const SymMatrix> layers, const WeightVector& w,
                        const BarycenterConfig& cfg) {
  switch (cfg.metric) {
    case BarycenterMetric::Frobenius: return barycenter_frobenius(layers, w);
    case BarycenterMetric::Riemannian: return barycenter_riemannian(layers, w, cfg);
    case BarycenterMetric::Wasserstein: return barycenter_wasserstein(layers, w, cfg);
  }
  throw Error(ErrorKind::InvalidParameter, "unknown barycenter metric");
}

std::vector<SymMatrix> layer_matrices(const Multiplex& layers) {
  std::vector<SymMatrix> out;
  out.reserve(layers.size());
  for (const auto& layer : layers.layers()) out.push_back(layer.sym());
  return out;
}

FusionResult barycenter(const Multiplex& layers, const WeightVector& w,
                        const BarycenterConfig& cfg) {
  const auto mats = layer_matrices(layers);
  FusionResult result = barycenter(std::span<const SymMatrix>(mats), w, cfg);
  result.labels = layers.labels();
  return result;
}

}  // namespace multifuse
