#include <doctest.h>

#include <random>

#include "kak/linalg.hpp"

using namespace kak;

namespace {

// Plain Taylor series with scaling, as an independent route to exp(X).
CMat taylorExp(const CMat& X) {
  int s = 0;
  double n = X.cwiseAbs().rowwise().sum().maxCoeff();
  while (n > 0.25) {
    n /= 2;
    ++s;
  }
  const CMat Y = X / std::pow(2.0, s);
  CMat term = CMat::Identity(X.rows(), X.cols()), sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * Y / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

CMat loopBracket(const CMat& A, const CMat& B) {
  const auto n = A.rows();
  CMat C = CMat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) C(i, j) += A(i, k) * B(k, j) - B(i, k) * A(k, j);
  return C;
}

CMat randomSkewHermitian(int n, std::mt19937_64& rng, double scale = 1) {
  std::normal_distribution<double> g(0, scale);
  CMat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = cplx(g(rng), g(rng));
  return (A - A.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("expm agrees with a scaled Taylor series") {
  std::mt19937_64 rng(3);
  for (int n : {2, 4, 7})
    for (double scale : {0.1, 1.0, 5.0}) {
      const CMat X = randomSkewHermitian(n, rng, scale);
      CHECK(maxAbs(expm(X) - taylorExp(X)) < 1e-11);
    }
}

TEST_CASE("expm of a skew-Hermitian matrix is unitary") {
  std::mt19937_64 rng(5);
  const CMat U = expm(randomSkewHermitian(6, rng, 3));
  CHECK(maxAbs(U.adjoint() * U - CMat::Identity(6, 6)) < 1e-12);
  CHECK(check(MatrixPredicate{PredicateKind::Unitary}, U).ok);
}

TEST_CASE("expm rejects non-square input") { CHECK_THROWS_AS(expm(CMat::Zero(2, 3)), DimensionError); }

TEST_CASE("bracket matches the triple loop and is antisymmetric") {
  std::mt19937_64 rng(7);
  const CMat A = randomSkewHermitian(5, rng), B = randomSkewHermitian(5, rng);
  CHECK(maxAbs(bracket(A, B) - loopBracket(A, B)) < 1e-13);
  CHECK(maxAbs(bracket(A, B) + bracket(B, A)) < 1e-14);
}

TEST_CASE("span coordinates recover a combination") {
  std::mt19937_64 rng(11);
  std::vector<CMat> basis;
  for (int i = 0; i < 4; ++i) basis.push_back(randomSkewHermitian(3, rng));
  const Span s(basis);
  const CMat X = 0.5 * basis[0] - 2.0 * basis[3];
  double res = 1;
  const RVec c = s.coords(X, &res);
  CHECK(res < 1e-12);
  CHECK(c(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c(3) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(s.residual(randomSkewHermitian(3, rng)) > 1e-3);
}

TEST_CASE("one-parameter subgroup is a homomorphism") {
  std::mt19937_64 rng(13);
  const OneParameterSubgroup G(randomSkewHermitian(4, rng));
  CHECK(maxAbs(G(0.3) * G(0.9) - G(1.2)) < 1e-12);
  CHECK(maxAbs(G(0.7) - expm(0.7 * G.generator())) < 1e-12);
}

TEST_CASE("symplectic predicate") {
  const CMat J = symplecticForm(2);
  CHECK(check(MatrixPredicate{PredicateKind::Symplectic}, CMat::Identity(4, 4)).ok);
  CHECK(check(MatrixPredicate{PredicateKind::Symplectic}, J).ok);
  CMat D = CMat::Identity(4, 4);
  D(0, 0) = cplx(0, 1);
  CHECK_FALSE(check(MatrixPredicate{PredicateKind::Symplectic}, D).ok);
}
