#include <doctest.h>

#include <random>
#include <set>

#include "kak/integrate.hpp"
#include "kak/spn.hpp"

using namespace kak;

TEST_CASE("sp(N) basis: dimension, closure, symplectic condition") {
  for (int N : {1, 2, 3}) {
    const auto g = spGroup(N);
    CHECK(g->algebraBasis.size() == static_cast<std::size_t>(N * (2 * N + 1)));
    CHECK(g->bracketClosureResidual() < 1e-12);
    const CMat J = symplecticForm(N);
    for (const auto& X : g->algebraBasis) {
      CHECK(maxAbs(X + X.adjoint()) < 1e-14);
      CHECK(maxAbs(X.transpose() * J + J * X) < 1e-14);
    }
  }
}

TEST_CASE("Sp(2) positive roots are 2a1, 2a2, a2 - a1, a2 + a1") {
  std::set<std::vector<Rational>> got;
  for (const auto& r : positiveRootsSpN(2)) got.insert(r.coords);
  const std::set<std::vector<Rational>> want{{Rational(2), Rational(0)},
                                             {Rational(0), Rational(2)},
                                             {Rational(-1), Rational(1)},
                                             {Rational(1), Rational(1)}};
  CHECK(got == want);
  CHECK(positiveRootsSpN(1).size() == 1);
  CHECK(positiveRootsSpN(3).size() == 9);
}

TEST_CASE("M is {diag(D, conj D)}, of order 2^N, centralizing A") {
  for (int N : {1, 2, 3}) {
    const auto M = mGroupSpN(N);
    CHECK(M.size() == (std::size_t{1} << N));
    const CMat T = spTorus(N, std::vector<double>(static_cast<std::size_t>(N), 0.37));
    for (const auto& m : M) CHECK(maxAbs(m * T - T * m) < 1e-13);
  }
}

TEST_CASE("closed-form Jacobian vanishes on walls and matches the sine product") {
  CHECK(jacobianSpN(2, {0.4, 0.4}) == doctest::Approx(0).scale(1));
  CHECK(jacobianSpN(1, {kPi / 4}) != 0);
  const std::vector<double> y{0.2, 0.5, 1.1};
  double p = 1;
  for (const auto& r : positiveRootsSpN(3)) p *= std::sin(r(y));
  CHECK(std::abs(jacobianSpN(3, y)) == doctest::Approx(std::abs(p)).epsilon(1e-12));
  CHECK_THROWS_AS(jacobianSpN(2, {0.1}), DimensionError);
}

TEST_CASE("Sp(N) chart lands in the group and rejects y outside A") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  for (int N : {1, 2}) {
    const EulerChart c = buildSpNChart(N);
    const SpNLayout L{N};
    CHECK(c.size() == static_cast<std::size_t>(L.size()));
    for (int t = 0; t < 5; ++t) {
      Params p(c.size());
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = c.params[i].lo + (c.params[i].hi - c.params[i].lo) * U(rng);
      std::vector<double> y;
      for (int j = 0; j < N; ++j) y.push_back(p[static_cast<std::size_t>(L.y(j))]);
      std::sort(y.begin(), y.end());
      for (int j = 0; j < N; ++j) p[static_cast<std::size_t>(L.y(j))] = y[static_cast<std::size_t>(j)];
      CHECK(check(spGroup(N)->membership, c.evaluate(p)).ok);
    }
  }
  const EulerChart c2 = buildSpNChart(2);
  Params bad(c2.size(), 0.1);
  const SpNLayout L{2};
  bad[static_cast<std::size_t>(L.y(0))] = 1.0;
  bad[static_cast<std::size_t>(L.y(1))] = 0.5;  // y1 > y2
  CHECK_THROWS_AS(c2.evaluate(bad), RegionError);
}

TEST_CASE("Sp(1) Haar quadrature: E|g11|^2 = 1/2 at order 40") {
  QuadratureSpec spec;
  spec.order = 40;
  const EulerChart c = buildSpNChart(1);
  const auto r = integrateChart(c, [](const CMat& g) { return cplx(std::norm(g(0, 0))); }, spec);
  CHECK(std::abs(r.value - 0.5) < 1e-6);
}

TEST_CASE("quaternionic sampler output is symplectic and unitary") {
  std::mt19937_64 rng(9);
  for (int N : {1, 2})
    for (int t = 0; t < 20; ++t) CHECK(check(spGroup(N)->membership, haarSampleSpOne(N, rng)).ok);
}
