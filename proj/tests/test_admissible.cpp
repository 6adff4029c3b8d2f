#include <doctest.h>

#include <random>

#include "kak/admissible.hpp"
#include "kak/suites.hpp"

using namespace kak;

namespace {

AdmissibleFunction single(int N, int k, int l, ExponentVec e, Monomial m, cplx c = 1) {
  AdmissibleFunction f;
  f.N = N;
  f.k = k;
  f.l = l;
  f.terms[e][m] = c;
  return canonicalize(f);
}

Monomial mono(std::vector<int> x, std::vector<int> s) { return {std::move(x), std::move(s)}; }

// z1 + z1^{-1} (2 x - 1) on [0,1] x S*.
AdmissibleFunction tiltedPair() {
  AdmissibleFunction f;
  f.N = 1;
  f.k = 1;
  f.l = 1;
  f.terms[{Rational(1)}][mono({0}, {0})] = 1;
  f.terms[{Rational(-1)}][mono({1}, {0})] = 2;
  f.terms[{Rational(-1)}][mono({0}, {0})] = -1;
  return canonicalize(f);
}

// 0 in conv(points) for d <= 2 by angular gaps, written independently of the simplex solver.
bool hullByAngles(const std::vector<ExponentVec>& pts) {
  const std::size_t d = pts.front().size();
  if (d == 1) {
    double lo = 1e300, hi = -1e300;
    for (const auto& p : pts) {
      lo = std::min(lo, toDouble(p[0]));
      hi = std::max(hi, toDouble(p[0]));
    }
    return lo <= 0 && hi >= 0;
  }
  std::vector<double> ang;
  for (const auto& p : pts) {
    const double x = toDouble(p[0]), y = toDouble(p[1]);
    if (x == 0 && y == 0) return true;
    ang.push_back(std::atan2(y, x));
  }
  std::sort(ang.begin(), ang.end());
  double gap = ang.front() + 2 * kPi - ang.back();
  for (std::size_t i = 1; i < ang.size(); ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
  return gap <= kPi + 1e-12;
}

}  // namespace

TEST_CASE("evaluate: z1 at pi/2, x s at 1/2, and the half-power branch cut") {
  const auto z = single(1, 0, 1, {Rational(1)}, mono({}, {}));
  CHECK(std::abs(evaluate(z, {}, {kPi / 2}) - cplx(0, 1)) < 1e-15);
  const auto xs = single(1, 1, 0, {}, mono({1}, {1}));
  CHECK(evaluate(xs, {0.5}, {}).real() == doctest::Approx(0.5 * std::sqrt(3.0) / 2));
  const auto h = single(2, 0, 1, {Rational(1, 2)}, mono({}, {}));
  CHECK(std::abs(evaluate(h, {}, {2 * kPi - 1e-9}) - cplx(-1)) < 1e-8);
  CHECK(std::abs(evaluate(h, {}, {1e-9}) - cplx(1)) < 1e-8);
  CHECK_THROWS_AS(evaluate(xs, {1.5}, {}), std::domain_error);
}

TEST_CASE("canonicalize rewrites s^2 and audits denominators") {
  AdmissibleFunction f;
  f.N = 1;
  f.k = 1;
  f.l = 1;
  f.terms[{Rational(0)}][mono({0}, {1})] = 1;
  const auto sq = powerExpand(canonicalize(f), 2);
  // s^2 = 1 - x^2
  const auto& poly = sq.terms.at({Rational(0)});
  CHECK(std::abs(poly.at(mono({0}, {0})) - cplx(1)) < 1e-15);
  CHECK(std::abs(poly.at(mono({2}, {0})) - cplx(-1)) < 1e-15);
  AdmissibleFunction bad = f;
  bad.terms[{Rational(1, 3)}][mono({0}, {0})] = 1;
  CHECK_THROWS_AS(canonicalize(bad), AdmissibilityError);
  CHECK(maxDenominator(single(4, 0, 2, {Rational(1, 4), Rational(1, 2)}, mono({}, {}))) == 4);
}

TEST_CASE("powerExpand: binomial and half-exponent examples") {
  AdmissibleFunction f;
  f.N = 1;
  f.k = 0;
  f.l = 1;
  f.terms[{Rational(1)}][mono({}, {})] = 1;
  f.terms[{Rational(-1)}][mono({}, {})] = 1;
  const auto sq = powerExpand(canonicalize(f), 2);
  CHECK(sq.terms.size() == 3);
  CHECK(std::abs(sq.terms.at({Rational(0)}).begin()->second - cplx(2)) < 1e-15);
  const auto cube = powerExpand(single(2, 1, 1, {Rational(1, 2)}, mono({1}, {0})), 3);
  REQUIRE(cube.terms.size() == 1);
  CHECK(cube.terms.begin()->first[0] == Rational(3, 2));
  CHECK(cube.terms.begin()->second.begin()->first.xpow[0] == 3);
  CHECK_THROWS_AS(powerExpand(canonicalize(f), 30, 8), PowerOverflowError);
}

TEST_CASE("powerExpand agrees with pointwise powers") {
  const auto fs = randomAdmissibleBatch(10, 3, 2, 2, 17);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0, 1);
  for (const auto& f : fs)
    for (int P : {2, 3}) {
      const auto g = powerExpand(f, P);
      for (int t = 0; t < 5; ++t) {
        const std::vector<double> x{U(rng), U(rng)}, th{2 * kPi * U(rng), 2 * kPi * U(rng)};
        const cplx a = std::pow(evaluate(f, x, th), P), b = evaluate(g, x, th);
        CHECK(std::abs(a - b) <= 1e-9 * (1 + std::abs(a)));
      }
    }
}

TEST_CASE("multiply agrees pointwise and raises the bound for mixed denominators") {
  const auto a = single(2, 0, 1, {Rational(1, 2)}, mono({}, {}));
  const auto b = single(3, 0, 1, {Rational(1, 3)}, mono({}, {}));
  const auto ab = multiply(a, b);
  CHECK(ab.terms.begin()->first[0] == Rational(5, 6));
  CHECK(std::abs(evaluate(ab, {}, {1.0}) - evaluate(a, {}, {1.0}) * evaluate(b, {}, {1.0})) < 1e-14);
}

TEST_CASE("torus integral is exact on integers") {
  CHECK(torusIntegral(Rational(0)) == cplx(2 * kPi));
  CHECK(torusIntegral(Rational(3)) == cplx(0));
  CHECK(std::abs(torusIntegral(Rational(1, 2)) - cplx(0, 4)) < 1e-14);  // (e^{i pi} - 1) / (i/2)
}

TEST_CASE("zero in hull: examples and an angular oracle") {
  CHECK_FALSE(zeroInHull({{Rational(1), Rational(0)}}));
  CHECK(zeroInHull({{Rational(1), Rational(0)}, {Rational(-1), Rational(0)}}));
  CHECK_THROWS_AS(zeroInHull({}), std::domain_error);
  CHECK_THROWS_AS(zeroInHull({{Rational(1)}, {Rational(1), Rational(2)}}), DimensionError);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> n(1, 6), num(-3, 3), den(1, 4), dim(1, 2);
  for (int t = 0; t < 500; ++t) {
    const int d = dim(rng);
    std::vector<ExponentVec> pts(static_cast<std::size_t>(n(rng)));
    for (auto& p : pts)
      for (int a = 0; a < d; ++a) p.push_back(Rational(num(rng), den(rng)));
    CHECK(zeroInHull(pts) == hullByAngles(pts));
  }
}

TEST_CASE("Caratheodory brute force agrees with the simplex in dimension <= 4") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> n(1, 8), num(-3, 3), den(1, 4), dim(1, 4);
  for (int t = 0; t < 300; ++t) {
    const int d = dim(rng);
    std::vector<ExponentVec> pts(static_cast<std::size_t>(n(rng)));
    for (auto& p : pts)
      for (int a = 0; a < d; ++a) p.push_back(Rational(num(rng), den(rng)));
    CHECK(zeroInHull(pts) == zeroInHullBruteForce(pts));
  }
}

TEST_CASE("curated scans") {
  MomentBudget b;
  const WeightSpec flat1 = weightBySelector("flat", 1), flat0 = weightBySelector("flat", 0);
  SUBCASE("z1 is consistent") {
    const auto f = single(1, 0, 1, {Rational(1)}, mono({}, {}));
    CHECK((momentScan(f, flat0, 4, b).status == ScanStatus::Consistent));
  }
  SUBCASE("1 fails the hypothesis") {
    const auto f = single(1, 0, 1, {Rational(0)}, mono({}, {}));
    CHECK((momentScan(f, flat0, 4, b).status == ScanStatus::HypothesisNotMet));
  }
  SUBCASE("z1 + 1/z1: second moment is 2 * 2pi") {
    AdmissibleFunction f;
    f.N = 1;
    f.l = 1;
    f.terms[{Rational(1)}][mono({}, {})] = 1;
    f.terms[{Rational(-1)}][mono({}, {})] = 1;
    const auto r = momentScan(canonicalize(f), flat0, 2, b);
    CHECK((r.status == ScanStatus::HypothesisNotMet));
    REQUIRE(r.moments.size() == 2);
    CHECK(std::abs(r.moments[1].value - cplx(4 * kPi)) < 1e-10);
  }
  SUBCASE("z1 + (2x - 1)/z1: moments vanish up to P = 3, not at P = 4") {
    const auto f = tiltedPair();
    CHECK((momentScan(f, flat1, 3, b).status == ScanStatus::PotentialCounterexample));
    CHECK((momentScan(f, flat1, 4, b).status == ScanStatus::HypothesisNotMet));
  }
  SUBCASE("zero budget is inconclusive") {
    MomentBudget none;
    none.order = 0;
    none.samples = 0;
    CHECK((momentScan(tiltedPair(), flat1, 3, none).status == ScanStatus::Inconclusive));
  }
}

TEST_CASE("file format round trip and parse errors with positions") {
  const auto f = randomAdmissibleBatch(1, 4, 2, 3, 5).front();
  const auto g = parseAdmissible(serializeAdmissible(f));
  CHECK(g.terms.size() == f.terms.size());
  CHECK(g.spectrum() == f.spectrum());
  CHECK(serializeAdmissible(g) == serializeAdmissible(f));
  CHECK(parseFrac("-3/6") == Rational(-1, 2));
  CHECK(fracToString(Rational(7, 3)) == "7/3");
  try {
    parseAdmissible("{\n  \"N\": 1,\n  \"k\": 0\n  \"l\": 1\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 4);
  }
  CHECK_THROWS_AS(parseAdmissible(R"({"N":1,"k":0,"l":1,"terms":[{"exponents":["1/2"],"poly":[{"xpow":[],"spow":[],"coeff":[1,0]}]}]})"),
                  ParseError);
}
