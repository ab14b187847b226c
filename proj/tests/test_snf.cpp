#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "multifuse/snf.hpp"
#include "oracles.hpp"

using namespace multifuse;
using Eigen::MatrixXd;

namespace {

MatrixXd m3(std::initializer_list<double> v) {
  MatrixXd m(3, 3);
  auto it = v.begin();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = *it++;
  return m;
}

SimilarityLayer layer(const MatrixXd& m) {
  return SimilarityLayer(index_labels(m.rows()), SymMatrix(m), SimilarityKind::External);
}

Multiplex multiplex(const std::vector<MatrixXd>& ms) {
  std::vector<SimilarityLayer> ls;
  for (const auto& m : ms) ls.push_back(layer(m));
  return Multiplex(std::move(ls));
}

const MatrixXd kS1 = m3({1, .9, .2, .9, 1, .5, .2, .5, 1});
const MatrixXd kS2 = m3({1, .3, .6, .3, 1, .8, .6, .8, 1});
const MatrixXd kS3 = m3({1, .9, .4, .9, 1, .3, .4, .3, 1});

}  // namespace

TEST_CASE("global_normalize") {
  const MatrixXd p = global_normalize(layer(MatrixXd::Ones(2, 2)));
  CHECK(p == MatrixXd::Constant(2, 2, 0.25));
  const MatrixXd pi = global_normalize(layer(MatrixXd::Identity(2, 2)));
  CHECK(pi == 0.5 * MatrixXd::Identity(2, 2));
  MatrixXd m(2, 2);
  m << 1, 1, 1, 2;
  m /= 2.0;
  CHECK(oracle::max_abs_diff(global_normalize(layer(m)), m / 2.5) <= 1e-16);
  CHECK_THROWS_AS(global_normalize(layer(MatrixXd::Zero(3, 3))), Error);
}

TEST_CASE("row_normalize gives row-stochastic matrices") {
  const MatrixXd p = row_normalize(layer(kS1));
  for (int i = 0; i < 3; ++i) CHECK(p.row(i).sum() == doctest::Approx(1.0));
}

TEST_CASE("local_normalize") {
  SUBCASE("full neighbourhood") {
    const auto k = local_normalize(layer(kS1), 2);
    for (int i = 0; i < 3; ++i) {
      CHECK(k.q.row(i).sum() == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(k.q(i, i) == 0.0);
    }
    CHECK(k.zero_rows.empty());
  }
  SUBCASE("row (., 0.6, 0.3, 0.1), k=2") {
    MatrixXd s(4, 4);
    s << 1, .6, .3, .1, .6, 1, .2, .2, .3, .2, 1, .2, .1, .2, .2, 1;
    const auto k = local_normalize(layer(s), 2);
    CHECK(k.q(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(k.q(0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(k.q(0, 3) == 0.0);
  }
  SUBCASE("ties go to the lower index") {
    MatrixXd s = MatrixXd::Constant(4, 4, 0.5);
    s.diagonal().setOnes();
    const auto k = local_normalize(layer(s), 1);
    CHECK(k.q(0, 1) == 1.0);
    CHECK(k.q(1, 0) == 1.0);
    CHECK(k.q(3, 0) == 1.0);
    CHECK(nearest_neighbours(s, 2, 2) == std::vector<Eigen::Index>{0, 1});
  }
  SUBCASE("zero neighbour row stays zero and is reported") {
    MatrixXd s = MatrixXd::Identity(3, 3);
    s(0, 1) = s(1, 0) = 0.5;
    const auto k = local_normalize(layer(s), 1);
    CHECK(k.zero_rows == std::vector<Eigen::Index>{2});
    CHECK(k.q.row(2).isZero());
  }
  SUBCASE("k out of range") {
    CHECK_THROWS_AS(local_normalize(layer(kS1), 0), Error);
    CHECK_THROWS_AS(local_normalize(layer(kS1), 3), Error);
  }
}

TEST_CASE("cdp_step: identical layers give Q P Q^T") {
  const auto k = local_normalize(layer(kS1), 1);
  const MatrixXd p = global_normalize(layer(kS1));
  StatusMatrices st{{p, p}, {k.q, k.q}, 0, {}};
  const auto next = cdp_step(st);
  const MatrixXd want = k.q * p * k.q.transpose();
  CHECK(oracle::max_abs_diff(next.p[0], 0.5 * (want + want.transpose())) <= 1e-16);
  CHECK(next.p[0] == next.p[1]);
  CHECK(next.t == 1);
  REQUIRE(next.residuals.size() == 1);
  CHECK(next.residuals[0].size() == 2);
}

TEST_CASE("cdp_step: identity kernels average the other layers") {
  std::mt19937_64 rng(2);
  std::vector<MatrixXd> p;
  for (int l = 0; l < 3; ++l) p.push_back(oracle::random_rbf(rng, 5));
  const MatrixXd id = MatrixXd::Identity(5, 5);
  StatusMatrices st{p, {id, id, id}, 0, {}};
  const auto next = cdp_step(st);
  CHECK(oracle::max_abs_diff(next.p[0], 0.5 * (p[1] + p[2])) <= 1e-15);
  CHECK(oracle::max_abs_diff(next.p[2], 0.5 * (p[0] + p[1])) <= 1e-15);
}

TEST_CASE("cdp_step: one step on the 3-node fixture matches the literal oracle") {
  const oracle::SnfOracle ref({kS1, kS2}, 2);
  StatusMatrices st{{global_normalize(layer(kS1)), global_normalize(layer(kS2))},
                    {local_normalize(layer(kS1), 2).q, local_normalize(layer(kS2), 2).q},
                    0,
                    {}};
  const auto next = cdp_step(st);
  const auto want = ref.step(ref.p);
  CHECK(oracle::max_abs_diff(next.p[0], want[0]) <= 1e-15);
  CHECK(oracle::max_abs_diff(next.p[1], want[1]) <= 1e-15);

  // values from an independent numpy run of the same update
  const MatrixXd p1 = m3({0.14695247933884298, 0.08228490259740259, 0.12337662337662338,
                          0.08228490259740259, 0.12755102040816327, 0.09167729591836735,
                          0.12337662337662338, 0.09167729591836735, 0.11160714285714286});
  const MatrixXd p2 = m3({0.12544802867383517, 0.11681329423264909, 0.09139784946236562,
                          0.11681329423264909, 0.11010397227406025, 0.08504398826979473,
                          0.09139784946236562, 0.08504398826979473, 0.15339038841342995});
  CHECK(oracle::max_abs_diff(next.p[0], p1) <= 1e-15);
  CHECK(oracle::max_abs_diff(next.p[1], p2) <= 1e-15);

  StatusMatrices one{{st.p[0]}, {st.q[0]}, 0, {}};
  CHECK_THROWS_AS(cdp_step(one), Error);
}

TEST_CASE("reweight_status_average") {
  MatrixXd a(3, 3);
  a << 5, 0.2, 0.1, 0.2, 7, 0.4, 0.1, 0.4, 2;
  const SymMatrix s = reweight_status_average(a);
  CHECK(s(0, 1) == doctest::Approx(0.5));
  CHECK(s(1, 2) == 1.0);
  CHECK(s.matrix().diagonal() == Eigen::VectorXd::Ones(3));
}

TEST_CASE("snf_fuse: converged 3-node fixture, k=1") {
  SnfConfig cfg;
  cfg.k = 1;
  cfg.epsilon = 1e-8;
  const auto r = snf_fuse(multiplex({kS1, kS3}), cfg);
  CHECK(r.converged);
  CHECK(r.method == "snf");
  int iters = 0;
  const MatrixXd want = oracle::SnfOracle({kS1, kS3}, 1).run(1e-8, 100, &iters);
  CHECK(r.iterations == iters);
  CHECK(oracle::max_abs_diff(r.matrix.matrix(), want) <= 1e-10);
  const MatrixXd frozen = m3({1, 0.9473684210526316, 1, 0.9473684210526316, 1, 1, 1, 1, 1});
  CHECK(oracle::max_abs_diff(r.matrix.matrix(), frozen) <= 1e-10);
}

TEST_CASE("snf_fuse: identical uniform layers give constant off-diagonal weights") {
  MatrixXd s = MatrixXd::Constant(5, 5, 0.3);
  s.diagonal().setOnes();
  // k = n - 1: with fewer neighbours the lower-index tie-break singles out
  // nodes and the kernel itself is no longer exchangeable
  SnfConfig cfg;
  cfg.k = 4;
  const auto r = snf_fuse(multiplex({s, s, s}), cfg);
  const double v = r.matrix(0, 1);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) CHECK(r.matrix(i, j) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("snf_fuse: diagnostics and output invariants") {
  std::mt19937_64 rng(77);
  std::vector<MatrixXd> s;
  for (int l = 0; l < 3; ++l) s.push_back(oracle::random_rbf(rng, 9));
  SnfConfig cfg = SnfConfig::defaults_for(9);
  cfg.max_iter = 200;
  const auto r = snf_fuse(multiplex(s), cfg);
  CHECK(r.residual_history.size() == static_cast<std::size_t>(r.iterations));
  for (double x : r.residual_history) CHECK(std::isfinite(x));
  if (r.converged) CHECK(r.residual < cfg.epsilon);
  const MatrixXd& m = r.matrix.matrix();
  CHECK(m == m.transpose());
  CHECK(m.minCoeff() >= 0.0);
  CHECK(m.maxCoeff() <= 1.0);
  CHECK(m.diagonal() == Eigen::VectorXd::Ones(9));
  CHECK(oracle::max_abs_diff(m, oracle::SnfOracle(s, cfg.k).run(cfg.epsilon, 200)) <= 1e-10);
}

TEST_CASE("snf_fuse: non-convergence is reported, not thrown") {
  SnfConfig cfg;
  cfg.k = 1;
  cfg.max_iter = 7;
  cfg.epsilon = 1e-12;
  const auto r = snf_fuse(multiplex({kS1, kS2}), cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 7);
}

TEST_CASE("snf_fuse: configuration errors") {
  SnfConfig cfg;
  cfg.k = 5;
  CHECK_THROWS_AS(snf_fuse(multiplex({kS1, kS2}), cfg), Error);
  CHECK_THROWS_AS(snf_fuse(multiplex({kS1}), SnfConfig{}), Error);
  cfg.k = 1;
  cfg.epsilon = 0;
  CHECK_THROWS_AS(snf_fuse(multiplex({kS1, kS2}), cfg), Error);
  CHECK(SnfConfig::defaults_for(16).k == 5);
  CHECK(SnfConfig::defaults_for(2).k == 1);
  CHECK(SnfConfig::defaults_for(3).k == 1);
}

TEST_CASE("snf_fuse: residual below 1e-6 at 200 steps on 100 random multiplexes") {
  std::mt19937_64 rng(2024);
  int failures = 0;
  int failures_two_layers = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 10;
    const int m = 2 + trial % 3;
    std::vector<MatrixXd> s;
    for (int l = 0; l < m; ++l) s.push_back(oracle::random_rbf(rng, n));
    SnfConfig cfg = SnfConfig::defaults_for(n);
    cfg.max_iter = 200;
    const auto r = snf_fuse(multiplex(s), cfg);
    if (!(r.residual < 1e-6)) {
      ++failures;
      if (m == 2) ++failures_two_layers;
    }
  }
  MESSAGE("not converged: " << failures << " (m = 2: " << failures_two_layers << ")");
  CHECK(failures == 0);
}

TEST_CASE("snf_fuse: permutation equivariance is bit-exact") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6 + trial % 5;
    std::vector<MatrixXd> s;
    for (int l = 0; l < 3; ++l) s.push_back(oracle::random_rbf(rng, n));
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<MatrixXd> sp;
    for (const auto& m : s) {
      MatrixXd x(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x(i, j) = m(perm[i], perm[j]);
      sp.push_back(x);
    }
    SnfConfig cfg = SnfConfig::defaults_for(n);
    const auto a = snf_fuse(multiplex(s), cfg);
    const auto b = snf_fuse(multiplex(sp), cfg);
    CHECK(a.iterations == b.iterations);
    bool same = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) same = same && b.matrix(i, j) == a.matrix(perm[i], perm[j]);
    CHECK(same);
  }
}

TEST_CASE("snf_fuse: three or more layers converge on random multiplexes") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 10;
    const int m = 3 + trial % 2;
    std::vector<MatrixXd> s;
    for (int l = 0; l < m; ++l) s.push_back(oracle::random_rbf(rng, n));
    SnfConfig cfg = SnfConfig::defaults_for(n);
    cfg.max_iter = 200;
    CHECK(snf_fuse(multiplex(s), cfg).residual < 1e-6);
  }
}
