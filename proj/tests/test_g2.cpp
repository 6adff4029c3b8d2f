#include <doctest.h>

#include <random>

#include "kak/g2.hpp"

using namespace kak;

namespace {

bool realAntisymmetric(const CMat& X) { return maxAbs(X + X.transpose()) < 1e-14 && X.imag().cwiseAbs().maxCoeff() < 1e-14; }

}  // namespace

TEST_CASE("g2 generators: 14 real antisymmetric, independent, closed") {
  const auto& ctx = g2Context();
  REQUIRE(ctx.lambdas.size() == 14);
  for (const auto& l : ctx.lambdas) CHECK(realAntisymmetric(l));
  CHECK(ctx.group->gramMinEig() > 1e-8);
  CHECK(ctx.group->bracketClosureResidual() < 1e-10);
}

TEST_CASE("ad(lambda5) and ad(lambda11) match the typeset integer matrices") {
  const auto& ctx = g2Context();
  CHECK((adMatrix(ctx, ctx.lambda(5)) - ctx.printedAd5).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((adMatrix(ctx, ctx.lambda(11)) - ctx.printedAd11).cwiseAbs().maxCoeff() < 1e-12);
  // the typeset matrices are integer-valued
  CHECK((ctx.printedAd5.array() - ctx.printedAd5.array().round()).abs().maxCoeff() == 0);
}

TEST_CASE("roots of g2: 12, closed under negation, lengths in ratio 1 : 3") {
  const auto ex = extractRoots(g2Context());
  REQUIRE(ex.roots.size() == 12);
  std::vector<double> len2;
  for (const auto& r : ex.roots) {
    CHECK(std::find(ex.roots.begin(), ex.roots.end(), -r) != ex.roots.end());
    // in (lambda5, lambda11) coordinates the invariant metric is proportional to diag(3, 1)
    const double a = toDouble(r.coords[0]), b = toDouble(r.coords[1]);
    len2.push_back(3 * a * a + b * b);
  }
  const auto [lo, hi] = std::minmax_element(len2.begin(), len2.end());
  CHECK(*hi / *lo == doctest::Approx(3.0));
}

TEST_CASE("corrected root vectors satisfy their eigen-equations") {
  const auto& ctx = g2Context();
  REQUIRE(ctx.correctedRootSpaces.size() == 12);
  for (const auto& e : ctx.correctedRootSpaces) CHECK(rootSpaceResidual(ctx, e) < 1e-10);
}

TEST_CASE("G2 Jacobian: product of sines of the six positive roots") {
  const double y1 = 0.9, y2 = 0.1;
  double p = 1;
  for (const auto& r : positiveRootsG2()) p *= std::sin(r({y1, y2}));
  CHECK(std::abs(jacobianG2(y1, y2)) == doctest::Approx(std::abs(p)).epsilon(1e-13));
  CHECK(jacobianG2(0.6, 0.2) == doctest::Approx(0).scale(1));  // wall y2 = y1 / 3
}

TEST_CASE("K chart is SU(2) x SU(2) in G2 and the full chart lands in G2") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  const EulerChart c = buildG2Chart();
  REQUIRE(c.size() == 14);
  for (int t = 0; t < 5; ++t) {
    Params p(14);
    for (std::size_t i = 0; i < 14; ++i) p[i] = c.params[i].lo + (c.params[i].hi - c.params[i].lo) * U(rng);
    p[7] = p[6] / 3 * U(rng);
    const CMat g = c.evaluate(p);
    CHECK(check(c.group->membership, g).ok);
    CHECK(maxAbs(g.imag()) < 1e-14);
  }
  Params bad(14, 0.1);
  bad[6] = 0.3;
  bad[7] = 0.2;
  CHECK_THROWS_AS(c.evaluate(bad), RegionError);
}

TEST_CASE("M has four elements for G2") { CHECK(g2Context().cartan.mGroup.size() == 4); }
