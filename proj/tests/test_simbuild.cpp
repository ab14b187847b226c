#include <cmath>
#include <random>

#include "doctest.h"
#include "multifuse/simbuild.hpp"
#include "oracles.hpp"

using namespace multifuse;
using Eigen::MatrixXd;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidInput;
}

FeatureTable scalars(std::initializer_list<double> v) {
  MatrixXd rows(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) rows(i++, 0) = x;
  return FeatureTable(index_labels(rows.rows()), rows);
}

}  // namespace

TEST_CASE("rbf_similarity examples") {
  const auto s = rbf_similarity(scalars({0, 1}), 1.0);
  CHECK(s(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(s(0, 1) == doctest::Approx(0.3678794).epsilon(1e-7));
  CHECK(s(0, 0) == 1.0);
  CHECK(s.kind() == SimilarityKind::Rbf);

  const auto same = rbf_similarity(scalars({2.5, 2.5}), 0.3);
  CHECK(same(0, 1) == 1.0);

  const auto wide = rbf_similarity(scalars({-3, 0, 1, 7}), 1e9);
  CHECK(wide.matrix().minCoeff() >= 1 - 1e-6);

  CHECK(kind_of([] { rbf_similarity(scalars({0, 1}), 0.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { rbf_similarity(scalars({0, 1}), -2.0); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("rbf on multivariate rows, default sigma and translation invariance") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  MatrixXd x(6, 4);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 4; ++j) x(i, j) = g(rng);
  double total = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) total += (x.row(i) - x.row(j)).squaredNorm();
  const FeatureTable t(index_labels(6), x);
  CHECK(default_sigma(t) == doctest::Approx(total / 30.0).epsilon(1e-14));

  const auto s = rbf_similarity(t);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(s(i, j) == doctest::Approx(std::exp(-(x.row(i) - x.row(j)).squaredNorm() / (total / 30.0))));

  MatrixXd shifted = x;
  shifted.rowwise() += Eigen::RowVectorXd::Constant(4, 17.25);
  const auto s2 = rbf_similarity(FeatureTable(index_labels(6), shifted), 1.3);
  const auto s1 = rbf_similarity(t, 1.3);
  CHECK(oracle::max_abs_diff(s1.matrix(), s2.matrix()) <= 1e-12);

  CHECK(default_sigma(scalars({4})) == 1.0);
  CHECK(default_sigma(scalars({2, 2, 2})) == 1.0);
}

TEST_CASE("FeatureTable validation") {
  MatrixXd bad(2, 1);
  bad << 1, std::nan("");
  CHECK_THROWS_AS(FeatureTable(index_labels(2), bad), Error);
  CHECK_THROWS_AS(FeatureTable(index_labels(3), MatrixXd::Zero(2, 1)), Error);
}

TEST_CASE("presence_similarity") {
  const auto s = presence_similarity(scalars({1, 1, 0}));
  CHECK(s(0, 1) == 1.0);
  CHECK(s(0, 2) == 0.0);
  CHECK(s(2, 2) == 1.0);
  const auto all = presence_similarity(scalars({0, 0, 0, 0, 0}));
  CHECK(all.matrix() == MatrixXd::Ones(5, 5));
  CHECK(kind_of([] { presence_similarity(scalars({1, 0.5})); }) == ErrorKind::InvalidInput);
}

TEST_CASE("one_mode_projection") {
  const IncidenceMatrix id(index_labels(3), index_labels(3), MatrixXd::Identity(3, 3));
  CHECK(one_mode_projection(id).matrix() == MatrixXd::Identity(3, 3));

  MatrixXd b(3, 2);
  b << 1, 1, 1, 0, 0, 1;
  const auto g = one_mode_projection(IncidenceMatrix(index_labels(3), index_labels(2), b));
  MatrixXd want(2, 2);
  want << 2, 1, 1, 2;
  CHECK(g.matrix() == want);

  MatrixXd e(2, 2);
  e << 1, 0, 1, 0;
  CHECK(one_mode_projection(IncidenceMatrix(index_labels(2), index_labels(2), e))(1, 1) == 0.0);

  MatrixXd nb(1, 1);
  nb << 2;
  CHECK_THROWS_AS(IncidenceMatrix(index_labels(1), index_labels(1), nb), Error);
}

TEST_CASE("jaccard and cosine examples") {
  MatrixXd g(2, 2);
  g << 3, 2, 2, 4;
  CHECK(jaccard_from_projection(SymMatrix(g))(0, 1) == doctest::Approx(0.4).epsilon(1e-15));
  g << 5, 5, 5, 5;
  CHECK(jaccard_from_projection(SymMatrix(g))(0, 1) == 1.0);
  CHECK(cosine_from_projection(SymMatrix(g))(0, 1) == 1.0);
  g << 3, 0, 0, 4;
  CHECK(jaccard_from_projection(SymMatrix(g))(0, 1) == 0.0);
  CHECK(cosine_from_projection(SymMatrix(g))(0, 1) == 0.0);
  g << 4, 2, 2, 1;
  CHECK(cosine_from_projection(SymMatrix(g))(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  const auto c = cosine_from_projection(SymMatrix(g), {"x", "y"});
  CHECK(c.labels() == Labels{"x", "y"});
  CHECK(c(0, 0) == 1.0);

  g << 0, 0, 0, 2;
  CHECK(kind_of([&] { jaccard_from_projection(SymMatrix(g)); }) == ErrorKind::DegenerateGroup);
  CHECK(kind_of([&] { cosine_from_projection(SymMatrix(g)); }) == ErrorKind::DegenerateGroup);
}

TEST_CASE("jaccard and cosine are PSD and nonnegative on 500 random incidences") {
  std::mt19937_64 rng(21);
  std::bernoulli_distribution coin(0.4);
  int done = 0;
  while (done < 500) {
    const int p = 3 + done % 12;
    const int n = 2 + done % 9;
    MatrixXd b(p, n);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = coin(rng) ? 1.0 : 0.0;
    if ((b.colwise().sum().array() == 0.0).any()) continue;
    const auto g = one_mode_projection(IncidenceMatrix(index_labels(p), index_labels(n), b));
    const auto j = jaccard_from_projection(g);
    const auto c = cosine_from_projection(g);
    CHECK(is_psd(j.sym(), 1e-10));
    CHECK(is_psd(c.sym(), 1e-10));
    CHECK(j.matrix().minCoeff() >= 0.0);
    CHECK(c.matrix().minCoeff() >= 0.0);
    CHECK(j.matrix().maxCoeff() <= 1.0);
    CHECK(c.matrix().maxCoeff() <= 1.0);
    CHECK(j.matrix().diagonal() == Eigen::VectorXd::Ones(n));
    ++done;
  }
}

TEST_CASE("SimilarityLayer invariants are enforced") {
  MatrixXd m(2, 2);
  m << 1, 1.5, 1.5, 1;
  CHECK_THROWS_AS(SimilarityLayer(index_labels(2), SymMatrix(m), SimilarityKind::External), Error);
  m << 0.5, 0.2, 0.2, 1;
  CHECK_THROWS_AS(SimilarityLayer(index_labels(2), SymMatrix(m), SimilarityKind::Rbf), Error);
  CHECK_NOTHROW(SimilarityLayer(index_labels(2), SymMatrix(m), SimilarityKind::External));
  CHECK_THROWS_AS(SimilarityLayer(index_labels(3), SymMatrix(m), SimilarityKind::External), Error);
}
