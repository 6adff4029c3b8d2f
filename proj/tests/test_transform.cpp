#include <doctest.h>

#include <random>

#include "kak/g2.hpp"
#include "kak/spn.hpp"
#include "kak/transform.hpp"

using namespace kak;

namespace {

SpNTerm emptyTerm(int N) {
  SpNTerm t;
  const int pairs = N * (N - 1) / 2;
  for (SuFactorData* d : {&t.tilde, &t.plain}) {
    d->phi.assign(static_cast<std::size_t>(pairs), 0);
    d->psi.assign(static_cast<std::size_t>(pairs), {0, 0});
    d->omega.assign(static_cast<std::size_t>(N - 1), 0);
  }
  t.y.assign(static_cast<std::size_t>(N), {0, 0});
  return t;
}

}  // namespace

TEST_CASE("tripleAngleS: endpoints and the cubic") {
  CHECK(tripleAngleS(0) == 0);
  CHECK(tripleAngleS(1) == doctest::Approx(0.5).epsilon(1e-15));
  double worst = 0;
  for (int i = 0; i <= 1000; ++i) {
    const double xi = i / 1000.0, s = tripleAngleS(xi);
    worst = std::max(worst, std::abs(4 * s * s * s - 3 * s + xi));
    CHECK(s >= 0);
    CHECK(s <= 0.5 + 1e-15);
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("typeset radical: principal branch picks another root, branch 2 matches") {
  CHECK(std::abs(tripleAngleRadical(0, 0).real() - std::sqrt(3.0) / 2) < 1e-12);
  const BranchReport r = radicalBranchDiagnostic();
  CHECK(r.matchingBranch == 2);
  CHECK(r.maxDeviation[2] < 1e-10);
  CHECK(r.maxDeviation[0] > 1e-3);
}

TEST_CASE("substitution identities") {
  // sin(2y) dy -> 2 xi d xi on [0, pi/2]
  const GLRule& r = gaussLegendre(20);
  double a = 0, b = 0, c = 0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    a += r.w[i] * std::sin(2 * r.x[i] * kPi / 2) * kPi / 2;
    b += r.w[i] * 2 * r.x[i];
    c += r.w[i] * std::cos(r.x[i] * kPi / 4) * kPi / 4;  // int_0^{pi/4} cos
  }
  CHECK(a == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(b == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(c == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("Sp(1) lowering of a single sin(y) term is one monomial in xi1") {
  FiniteTypeSpN f;
  f.N = 1;
  SpNTerm t = emptyTerm(1);
  t.y[0] = {1, 0};
  f.terms.push_back(t);
  const Lowered low = lowerSpN(f);
  REQUIRE(low.fn.terms.size() == 1);
  const auto& poly = low.fn.terms.begin()->second;
  REQUIRE(poly.size() == 1);
  CHECK(poly.begin()->first.xpow.back() == 1);
  for (const auto& e : low.fn.terms.begin()->first) CHECK(e == Rational(0));
  // weight reduces to 2 xi at N = 1 (up to the constant)
  const WeightSpec w = weightSpN(1);
  const double x1 = 0.3, x2 = 0.6;
  CHECK(w(&x2) / w(&x1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("G2 exponent map: denominators 2, 4, 2, 1, 2, 2, 2, 1") {
  FiniteTypeG2 f;
  G2Term t;
  t.k = {1, 1, 1, 1, 1, 1, 1, 1};
  t.l[0] = 1;
  f.terms.push_back(t);
  const Lowered low = lowerG2(f);
  REQUIRE(low.fn.terms.size() == 1);
  const ExponentVec& e = low.fn.terms.begin()->first;
  const std::vector<Rational> want{Rational(1, 2), Rational(1, 4), Rational(1, 2), Rational(1),
                                   Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1)};
  CHECK(e == want);
  CHECK(maxDenominator(low.fn) == 4);
  CHECK(denominatorAudit(low.fn, 4));
  // sin(psi~1) = x1 / sqrt 2
  CHECK(std::abs(low.fn.terms.begin()->second.begin()->second) == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("lowered denominators stay within max(2, 2(N-1))") {
  std::mt19937_64 rng(8);
  for (int N : {1, 2, 3, 4}) {
    for (int i = 0; i < 10; ++i) CHECK(maxDenominator(lowerSpN(randomSpN(N, rng)).fn) <= spnDenominatorBound(N));
  }
  for (int i = 0; i < 10; ++i) CHECK(maxDenominator(lowerG2(randomG2(rng)).fn) <= 4);
}

TEST_CASE("lowered function reproduces f at matching points") {
  // Sp(1): chart params (xi~, y, xi) with x = sin y.
  std::mt19937_64 rng(12);
  const FiniteTypeSpN f = randomSpN(1, rng);
  const Lowered low = lowerSpN(f);
  const EulerChart c = buildSpNChart(1);
  const Params p{1.1, 0.4, 2.5};
  // theta variables in full [0, 2pi) turns: e^{i m xi~} with xi~ in [0, pi] is (e^{2 i xi~})^{m/2}
  std::vector<double> th;
  for (std::size_t i = 0; i < c.params.size(); ++i)
    if (i != 1) th.push_back(p[i] * 2 * kPi / (c.params[i].hi - c.params[i].lo));
  const cplx a = evaluateSpN(f, p), b = evaluate(low.fn, {std::sin(p[1])}, th);
  CHECK(std::abs(a - b) < 1e-12);
}

TEST_CASE("weight consistency under xi = sin y") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> U(0.01, 0.99);
  for (int t = 0; t < 200; ++t) {
    const double y1 = kPi / 2 * U(rng), y2 = y1 / 3 * U(rng);
    const double lhs = g2XiWeight(std::sin(y1), std::sin(y2)) * std::cos(y1) * std::cos(y2) * 4;
    CHECK(lhs == doctest::Approx(jacobianG2(y1, y2)).epsilon(1e-10));
  }
  for (int t = 0; t < 200; ++t) {
    std::vector<double> y{kPi / 2 * U(rng), kPi / 2 * U(rng)};
    std::sort(y.begin(), y.end());
    const double xi[2] = {std::sin(y[0]), std::sin(y[1])};
    const double lhs = spnXiWeight(2, xi) * std::cos(y[0]) * std::cos(y[1]) * 4;
    CHECK(lhs == doctest::Approx(jacobianSpN(2, y)).epsilon(1e-10));
  }
}

TEST_CASE("malformed finite-type input") {
  FiniteTypeSpN f;
  f.N = 1;
  SpNTerm t = emptyTerm(1);
  t.y[0] = {1, 2};
  f.terms.push_back(t);
  CHECK_THROWS_AS(validate(f), MalformedInputError);
  FiniteTypeG2 g;
  G2Term u;
  u.m[0] = 3;
  g.terms.push_back(u);
  CHECK_THROWS_AS(validate(g), MalformedInputError);
  CHECK_THROWS_AS(parseFiniteTypeG2(R"({"group":"g2","terms":[{"c":[1,0],"k":[1,2],"l":[],"m":[]}]})"), MalformedInputError);
  const auto ok = parseFiniteTypeSpN(R"({"group":"spn","N":1,"terms":[{"c":[1,0],"tilde":{"xi":1},"y":[[1,0]],"plain":{"xi":-1}}]})");
  CHECK(ok.terms.size() == 1);
  CHECK(ok.terms[0].tilde.xi == 1);
}

TEST_CASE("Sp(1) transform holds to 1e-6 for P = 1..3") {
  std::mt19937_64 rng(21);
  std::vector<FiniteTypeSpN> fs;
  for (int i = 0; i < 3; ++i) fs.push_back(randomSpN(1, rng));
  TransformBudget b;
  b.lhsOrder = 32;
  const auto rep = verifyTransformSpN(1, fs, 3, b);
  CHECK(rep.maxDiff <= 1e-6);
  CHECK(rep.constantSpread <= 1e-3);
  CHECK(std::isnan(rep.printedConstantRatio));
}
