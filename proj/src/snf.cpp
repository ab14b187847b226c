#include "multifuse/snf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "multifuse/kernels.hpp"

namespace multifuse {

SnfConfig SnfConfig::defaults_for(Eigen::Index n) {
  SnfConfig cfg;
  const auto third = static_cast<int>(std::lround(static_cast<double>(n) / 3.0));
  cfg.k = std::clamp(third, 1, std::max(1, static_cast<int>(n) - 1));
  return cfg;
}

void SnfConfig::validate(Eigen::Index n) const {
  if (k < 1 || k > n - 1) {
    throw Error(ErrorKind::InvalidParameter, "k = " + std::to_string(k) + " outside [1, " +
                                                 std::to_string(n - 1) + "]");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidParameter, "epsilon must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidParameter, "max_iter must be at least 1");
}

namespace {

// Sums in sorted order so the result does not depend on node numbering.
double ordered_sum(const Eigen::MatrixXd& m) {
  std::vector<double> v(m.data(), m.data() + m.size());
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0);
}

double ordered_norm(const Eigen::MatrixXd& m) {
  return std::sqrt(ordered_sum(m.cwiseAbs2()));
}

}  // namespace

Eigen::MatrixXd global_normalize(const SimilarityLayer& s) {
  const double total = ordered_sum(s.matrix());
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidInput, "similarity layer sums to zero");
  return s.matrix() / total;
}

Eigen::MatrixXd row_normalize(const SimilarityLayer& s) {
  Eigen::MatrixXd p = s.matrix();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double row = p.row(i).sum();
    if (!(row > 0.0)) {
      throw Error(ErrorKind::InvalidInput, "row " + std::to_string(i) + " sums to zero");
    }
    p.row(i) /= row;
  }
  return p;
}

std::vector<Eigen::Index> nearest_neighbours(const Eigen::MatrixXd& s, Eigen::Index i, int k) {
  const Eigen::Index n = s.rows();
  std::vector<Eigen::Index> candidates;
  candidates.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != i) candidates.push_back(j);
  }
  const auto kk = static_cast<std::ptrdiff_t>(std::min<Eigen::Index>(k, n - 1));
  std::partial_sort(candidates.begin(), candidates.begin() + kk, candidates.end(),
                    [&](Eigen::Index a, Eigen::Index b) {
                      if (s(i, a) != s(i, b)) return s(i, a) > s(i, b);
                      return a < b;
                    });
  candidates.resize(static_cast<std::size_t>(kk));
  return candidates;
}

LocalKernel local_normalize(const SimilarityLayer& s, int k) {
  const Eigen::Index n = s.size();
  if (k < 1 || k > n - 1) {
    throw Error(ErrorKind::InvalidParameter, "k = " + std::to_string(k) + " outside [1, " +
                                                 std::to_string(n - 1) + "]");
  }
  LocalKernel out{Eigen::MatrixXd::Zero(n, n), {}};
  const Eigen::MatrixXd& m = s.matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto nbrs = nearest_neighbours(m, i, k);
    double total = 0.0;
    for (Eigen::Index j : nbrs) total += m(i, j);
    if (!(total > 0.0)) {
      out.zero_rows.push_back(i);
      continue;
    }
    for (Eigen::Index j : nbrs) out.q(i, j) = m(i, j) / total;
  }
  return out;
}

StatusMatrices cdp_step(const StatusMatrices& state) {
  if (state.p.size() < 2) {
    throw Error(ErrorKind::InvalidInput, "cross diffusion needs at least two layers");
  }
  if (state.q.size() != state.p.size()) {
    throw Error(ErrorKind::DimensionError, "status and kernel layer counts differ");
  }
  StatusMatrices next;
  next.q = state.q;
  next.t = state.t + 1;
  next.residuals = state.residuals;
  next.p = kernels::omp::cdp_update(state.p, state.q);
  std::vector<double> step_residuals;
  step_residuals.reserve(next.p.size());
  for (std::size_t l = 0; l < next.p.size(); ++l) {
    Eigen::MatrixXd& p = next.p[l];
    p = ((p + p.transpose()) * 0.5).eval();
    step_residuals.push_back(ordered_norm(p - state.p[l]));
  }
  next.residuals.push_back(std::move(step_residuals));
  return next;
}

SymMatrix reweight_status_average(const Eigen::MatrixXd& average) {
  const Eigen::Index n = average.rows();
  double top = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) top = std::max(top, average(i, j));
    }
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  if (top > 0.0) {
    s = (average / top).cwiseMax(0.0).cwiseMin(1.0);
  }
  s.diagonal().setOnes();
  return SymMatrix(s);
}

FusionResult snf_fuse(const Multiplex& layers, const SnfConfig& cfg) {
  const std::size_t m = layers.size();
  const Eigen::Index n = layers.nodes();
  if (m < 2) throw Error(ErrorKind::InvalidInput, "SNF needs at least two layers");
  cfg.validate(n);

  FusionResult result{.method = "snf", .labels = layers.labels(), .matrix = SymMatrix::zeros(n)};
  StatusMatrices state;
  for (std::size_t l = 0; l < m; ++l) {
    const SimilarityLayer& layer = layers.layer(l);
    state.p.push_back(cfg.normalization == StatusNormalization::Global ? global_normalize(layer)
                                                                       : row_normalize(layer));
    LocalKernel kernel = local_normalize(layer, cfg.k);
    for (Eigen::Index row : kernel.zero_rows) {
      if (std::find(result.zero_rows.begin(), result.zero_rows.end(), row) ==
          result.zero_rows.end()) {
        result.zero_rows.push_back(row);
      }
    }
    state.q.push_back(std::move(kernel.q));
  }
  std::sort(result.zero_rows.begin(), result.zero_rows.end());

  result.converged = false;
  for (int step = 0; step < cfg.max_iter; ++step) {
    StatusMatrices next = cdp_step(state);
    const auto& latest = next.residuals.back();
    const double worst = *std::max_element(latest.begin(), latest.end());
    result.residual_history.push_back(worst);
    result.residual = worst;
    result.iterations = step + 1;
    if (worst < cfg.epsilon) {
      // P_{l,T} with ||P_{l,T+1} - P_{l,T}|| < epsilon is the snapshot we keep.
      result.converged = true;
      break;
    }
    state = std::move(next);
  }

  Eigen::MatrixXd average = Eigen::MatrixXd::Zero(n, n);
  for (const auto& p : state.p) average += p;
  average /= static_cast<double>(m);
  result.matrix = reweight_status_average(average);
  return result;
}

}  // namespace multifuse
