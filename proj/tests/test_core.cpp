#include <doctest.h>

#include "kak/g2.hpp"
#include "kak/integrate.hpp"
#include "kak/spn.hpp"

using namespace kak;

TEST_CASE("region margin and bounding box") {
  const RegionSpec r = regionG2();
  const auto box = r.boundingBox();
  REQUIRE(box.size() == 2);
  CHECK(box[0].second == doctest::Approx(kPi / 2));
  CHECK(r.contains({1.0, 0.2}));
  CHECK_FALSE(r.contains({1.0, 0.5}));  // y2 > y1 / 3
  CHECK(r.margin({1.0, 0.2}) > 0);
  CHECK(r.margin({1.0, 0.5}) < 0);
}

TEST_CASE("root functionals evaluate linearly and negate") {
  const RootFunctional a{{Rational(1), Rational(-3)}};
  CHECK(a({2.0, 0.5}) == doctest::Approx(0.5));
  CHECK((-a).coords[1] == Rational(3));
  CHECK_THROWS_AS(a({1.0}), DimensionError);
}

TEST_CASE("generic Jacobian is a product of sines over positive roots") {
  const auto& cd = spnContext(2).cartan;
  const std::vector<double> y{0.3, 0.7};
  double p = 1;
  for (const auto& r : cd.positiveRoots) p *= std::sin(r(y));
  CHECK(std::abs(genericJacobian(cd, y)) == doctest::Approx(std::abs(p)).epsilon(1e-13));
}

TEST_CASE("numeric density oracle refuses boundary points") {
  const EulerChart chart = buildSpNChart(1);
  Params p(chart.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = chart.params[i].lo;
  CHECK_THROWS_AS(numericDensityOracle(chart, p), BoundaryError);
}

TEST_CASE("translation by a non-member is rejected") {
  const EulerChart chart = buildSpNChart(1);
  QuadratureSpec spec;
  spec.order = 8;
  CMat h = CMat::Identity(2, 2);
  h(0, 0) = 2;
  CHECK_THROWS_AS(haarInvarianceDefect(chart, h, [](const CMat& g) { return g(0, 0); }, Side::Left, spec), MembershipError);
}

TEST_CASE("Cartan data of Sp(2) validates") {
  const auto& ctx = spnContext(2);
  const CartanReport r = validateCartan(*ctx.group, ctx.cartan);
  CHECK(r.thetaResidual < 1e-12);
  CHECK(r.aCommutatorResidual < 1e-12);
  CHECK(r.mCentralizerResidual < 1e-12);
  CHECK(r.mClosed);
}

TEST_CASE("involution split of sp(1) has k = u(1) and p of dimension 2") {
  const auto& ctx = spnContext(1);
  const SplitResult s = splitByInvolution(*ctx.group, ctx.cartan.theta);
  CHECK(s.kBasis.size() == 1);
  CHECK(s.pBasis.size() == 2);
}

TEST_CASE("exp is injective on the interior of A for G2") {
  const auto r = expInjectivityProbe(g2Context().cartan, 200, 3);
  CHECK(r.minSeparation > 0);
  CHECK_THROWS(expInjectivityProbe(g2Context().cartan, 0));
}
