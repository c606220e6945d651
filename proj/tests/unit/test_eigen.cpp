#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "biot/linsolve.hpp"

using namespace biot;

namespace {

CsrMatrix tridiag(int n, double d, double off) {
  TripletBuilder b(n, n);
  for (int i = 0; i < n; ++i) {
    b.add(i, i, d);
    if (i + 1 < n) {
      b.add(i, i + 1, off);
      b.add(i + 1, i, off);
    }
  }
  return b.build(true);
}

EigenOptions sparse_path() {
  EigenOptions o;
  o.dense_limit = 0;
  return o;
}

}  // namespace

TEST_CASE("identical pencil has unit eigenvalues") {
  const CsrMatrix m = tridiag(20, 4.0, 1.0);
  for (const EigenOptions& o : {EigenOptions{}, sparse_path()}) {
    const EigenResult r = smallest_generalized_eigenpairs(m, m, 3, {}, o);
    REQUIRE(r.values.size() == 3);
    for (double v : r.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("diagonal pencil returns the first basis vector") {
  const std::vector<double> d{1.0, 2.0, 3.0};
  const CsrMatrix a = CsrMatrix::diagonal(d);
  const CsrMatrix m = CsrMatrix::identity(3);
  const EigenResult r = smallest_generalized_eigenpairs(a, m, 1);
  CHECK(r.values[0] == doctest::Approx(1.0));
  CHECK(std::abs(r.vectors[0][0]) == doctest::Approx(1.0));
  CHECK(std::abs(r.vectors[0][1]) < 1e-12);
  CHECK(std::abs(r.vectors[0][2]) < 1e-12);
  const EigenResult def = smallest_generalized_eigenpairs(a, m, 1, {{1.0, 0.0, 0.0}});
  CHECK(def.values[0] == doctest::Approx(2.0));
}

TEST_CASE("discrete Laplacian matches the closed form") {
  const int n = 10;
  const CsrMatrix a = tridiag(n, 2.0, -1.0);
  const CsrMatrix m = CsrMatrix::identity(n);
  for (const EigenOptions& o : {EigenOptions{}, sparse_path()}) {
    const EigenResult r = smallest_generalized_eigenpairs(a, m, 3, {}, o);
    for (int k = 1; k <= 3; ++k) {
      const double s = std::sin(k * std::numbers::pi / (2.0 * (n + 1)));
      CHECK(r.values[k - 1] == doctest::Approx(4.0 * s * s).epsilon(1e-8));
    }
    CHECK(r.max_residual < 1e-6);
  }
  // scaled as a stiffness matrix on h = 1/(n+1), the smallest value tends to pi^2
  const double h = 1.0 / (n + 1);
  const EigenResult r = smallest_generalized_eigenpairs(a.scaled(1.0 / (h * h)), m, 1);
  CHECK(std::abs(r.values[0] - std::numbers::pi * std::numbers::pi) < 0.1);
}

TEST_CASE("sparse and dense paths agree with a dense solver on a random pencil") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 60;
  Eigen::MatrixXd x(n, n), y(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      x(i, j) = u(rng);
      y(i, j) = u(rng);
    }
  const Eigen::MatrixXd a = x * x.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd mm = y * y.transpose() + n * Eigen::MatrixXd::Identity(n, n);
  TripletBuilder ba(n, n), bm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ba.add(i, j, a(i, j));
      bm.add(i, j, mm(i, j));
    }
  const CsrMatrix ca = ba.build(true), cm = bm.build(true);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, mm, Eigen::EigenvaluesOnly);
  for (const EigenOptions& o : {EigenOptions{}, sparse_path()}) {
    const EigenResult r = smallest_generalized_eigenpairs(ca, cm, 4, {}, o);
    for (int k = 0; k < 4; ++k) CHECK(r.values[k] == doctest::Approx(es.eigenvalues()(k)).epsilon(1e-7));
    for (const auto& v : r.vectors) {
      const auto mv = cm.multiply(v);
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += v[i] * mv[i];
      CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  const auto full = generalized_spectrum(to_dense(ca), to_dense(cm), n);
  REQUIRE(full.size() == static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) CHECK(full[k] == doctest::Approx(es.eigenvalues()(k)).epsilon(1e-9));
}

TEST_CASE("dense copy") {
  const CsrMatrix a = tridiag(3, 2.0, -1.0);
  const auto d = to_dense(a);
  const std::vector<double> ref{2, -1, 0, -1, 2, -1, 0, -1, 2};
  CHECK(d == ref);
}
