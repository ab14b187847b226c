#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "multifuse/netanalysis.hpp"
#include "oracles.hpp"

using namespace multifuse;
using Eigen::MatrixXd;

namespace {

SimilarityLayer layer(const MatrixXd& m, Labels labels = {}) {
  if (labels.empty()) labels = index_labels(m.rows());
  return SimilarityLayer(std::move(labels), SymMatrix(m), SimilarityKind::External);
}

MatrixXd two_cliques() {
  MatrixXd s = MatrixXd::Zero(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (i / 4 == j / 4) s(i, j) = 1.0;
  return s;
}

MatrixXd planted(int n, double in, double out) {
  MatrixXd s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = i == j ? 1.0 : ((i < n / 2) == (j < n / 2) ? in : out);
  return s;
}

MatrixXd random_similarity(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MatrixXd s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = i == j ? 1.0 : u(rng);
  return s;
}

MatrixXd fixture_a() {
  MatrixXd a(4, 4);
  a << 1, .8, .3, .1, .8, 1, .4, .2, .3, .4, 1, .7, .1, .2, .7, 1;
  return a;
}
MatrixXd fixture_b() {
  MatrixXd b(4, 4);
  b << 1, .5, .2, .6, .5, 1, .3, .1, .2, .3, 1, .9, .6, .1, .9, 1;
  return b;
}

}  // namespace

TEST_CASE("distance correlation: 4-node fixture") {
  const double d = distance_correlation(layer(fixture_a()), layer(fixture_b()));
  CHECK(std::abs(d - oracle::dcor(fixture_a(), fixture_b())) <= 1e-12);
  // numpy double-centering run on the same pair
  CHECK(std::abs(d - 0.96187666899743) <= 1e-12);
}

TEST_CASE("distance correlation: self, symmetry, range") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    const int n = 3 + t % 8;
    const MatrixXd a = random_similarity(rng, n);
    const MatrixXd b = random_similarity(rng, n);
    const double ab = distance_correlation(a, b);
    CHECK(ab == distance_correlation(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(std::abs(distance_correlation(a, a) - 1.0) <= 1e-12);
    if (t < 50) CHECK(std::abs(ab - oracle::dcor(a, b)) <= 1e-12);
  }
}

TEST_CASE("distance correlation: scale invariance and degenerate input") {
  std::mt19937_64 rng(2);
  const MatrixXd a = random_similarity(rng, 6);
  const MatrixXd b = random_similarity(rng, 6);
  CHECK(distance_correlation(a, 0.37 * b) == doctest::Approx(distance_correlation(a, b)).epsilon(1e-12));
  CHECK(distance_correlation(a, MatrixXd::Ones(6, 6)) == 0.0);
}

TEST_CASE("distance correlation: permutation invariance") {
  std::mt19937_64 rng(3);
  const MatrixXd a = random_similarity(rng, 7);
  const MatrixXd b = random_similarity(rng, 7);
  std::vector<int> p(7);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  MatrixXd ap(7, 7), bp(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      ap(i, j) = a(p[i], p[j]);
      bp(i, j) = b(p[i], p[j]);
    }
  CHECK(distance_correlation(ap, bp) == doctest::Approx(distance_correlation(a, b)).epsilon(1e-12));
}

TEST_CASE("distance correlation: errors") {
  try {
    distance_correlation(layer(fixture_a()), layer(MatrixXd::Identity(3, 3)));
    FAIL("expected DimensionError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionError);
  }
  try {
    distance_correlation(layer(fixture_a(), {"a", "b", "c", "d"}), layer(fixture_b()));
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
}

TEST_CASE("centered_row_distances rows and columns sum to zero") {
  std::mt19937_64 rng(4);
  const MatrixXd c = centered_row_distances(random_similarity(rng, 6));
  CHECK(c.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(c.colwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("correlation_table") {
  std::mt19937_64 rng(5);
  std::vector<SimilarityLayer> ls;
  for (int l = 0; l < 3; ++l) ls.push_back(layer(random_similarity(rng, 5)));
  const auto t = correlation_table({"x", "y", "z"}, ls);
  CHECK(t.values.diagonal() == Eigen::VectorXd::Ones(3));
  CHECK(t.values == t.values.transpose());
  CHECK(t.values(0, 2) == distance_correlation(ls[0], ls[2]));
}

TEST_CASE("modularity examples") {
  const MatrixXd s = two_cliques();
  const std::vector<int> good{0, 0, 0, 0, 1, 1, 1, 1};
  const std::vector<int> merged(8, 0);
  // two disconnected cliques with 6 edges each: Q = 2 * (12/24 - (12/24)^2) = 0.5
  CHECK(modularity(s, good, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(modularity(s, merged, 1.0) == doctest::Approx(0.0));
  CHECK(modularity(s, merged, 1.0) < modularity(s, good, 1.0));
  std::vector<int> singletons(5);
  std::iota(singletons.begin(), singletons.end(), 0);
  CHECK(modularity(MatrixXd::Identity(5, 5), singletons, 1.0) == 0.0);

  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const MatrixXd r = random_similarity(rng, 7);
    std::vector<int> c(7);
    for (auto& v : c) v = static_cast<int>(rng() % 3);
    for (double g : {0.5, 1.0, 1.7}) CHECK(modularity(r, c, g) == doctest::Approx(oracle::modularity(r, c, g)).epsilon(1e-12));
  }

  Partition p{index_labels(8), good, 0.0};
  CHECK(modularity(layer(s), p, 1.0) == doctest::Approx(0.5));
  p.labels[0] = "zz";
  CHECK_THROWS_AS(modularity(layer(s), p, 1.0), Error);
}

TEST_CASE("louvain: two disconnected cliques") {
  const auto p = louvain_communities(layer(two_cliques()));
  CHECK(p.count() == 2);
  CHECK(p.community == std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1});
  CHECK(p.modularity == doctest::Approx(0.5));
}

TEST_CASE("louvain: complete uniform graph is one community") {
  MatrixXd s = MatrixXd::Constant(6, 6, 0.4);
  s.diagonal().setOnes();
  const auto p = louvain_communities(layer(s));
  CHECK(p.count() == 1);
}

TEST_CASE("louvain: planted two blocks match exhaustive enumeration") {
  const MatrixXd s = planted(10, 0.9, 0.1);
  const auto p = louvain_communities(layer(s), 1.0, 42);
  double best = 0.0;
  const auto want = oracle::best_bipartition(s, &best);
  CHECK(p.community == want);
  CHECK(p.modularity == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("louvain: modularity field equals modularity() exactly") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    const auto s = layer(oracle::random_rbf(rng, 12));
    const auto p = louvain_communities(s, 1.0, static_cast<std::uint64_t>(t));
    CHECK(p.modularity == modularity(s, p, 1.0));
    // contiguous, numbered by first appearance
    int next = 0;
    for (int c : p.community) {
      CHECK(c <= next);
      if (c == next) ++next;
    }
    CHECK(next == p.count());
  }
}

TEST_CASE("louvain: fixed seed is deterministic") {
  std::mt19937_64 rng(8);
  const auto s = layer(oracle::random_rbf(rng, 30));
  const auto a = louvain_communities(s, 1.0, 99);
  const auto b = louvain_communities(s, 1.0, 99);
  CHECK(a.community == b.community);
  CHECK(a.modularity == b.modularity);
}

TEST_CASE("louvain: resolution changes granularity") {
  std::mt19937_64 rng(9);
  const auto s = layer(oracle::random_rbf(rng, 20));
  CHECK(louvain_communities(s, 3.0).count() >= louvain_communities(s, 0.2).count());
}

TEST_CASE("louvain: empty graph") {
  CHECK_THROWS_AS(louvain_communities(layer(MatrixXd::Identity(4, 4))), Error);
}
