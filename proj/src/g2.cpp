#include "kak/g2.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace kak {

namespace {

// Generators as printed, rows top to bottom.
const int kLambda[14][7][7] = {
    {{0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, -1}, {0, 0, 0, 0, 0, -1, 0}, {0, 0, 0, 0, 1, 0, 0}, {0, 0, 0, 1, 0, 0, 0}},  // lambda_1
    {{0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 0, 0, -1}, {0, 0, 0, -1, 0, 0, 0}, {0, 0, 0, 0, 1, 0, 0}},  // lambda_2
    {{0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, -1, 0, 0}, {0, 0, 0, 1, 0, 0, 0}, {0, 0, 0, 0, 0, 0, -1}, {0, 0, 0, 0, 0, 1, 0}},  // lambda_3
    {{0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, -1, 0, 0, 0, 0}, {0, -1, 0, 0, 0, 0, 0}},  // lambda_4
    {{0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, -1, 0}, {0, 0, 0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0}, {0, 0, -1, 0, 0, 0, 0}},  // lambda_5
    {{0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 0, 0}, {0, 0, 0, -1, 0, 0, 0}, {0, 0, 1, 0, 0, 0, 0}, {0, -1, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}},  // lambda_6
    {{0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, -1, 0, 0, 0}, {0, 0, 0, 0, -1, 0, 0}, {0, 1, 0, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}},  // lambda_7
    {{0, 0, 0, 0, 0, 0, 0}, {0, 0, -2, 0, 0, 0, 0}, {0, 2, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 0, 0}, {0, 0, 0, -1, 0, 0, 0}, {0, 0, 0, 0, 0, 0, -1}, {0, 0, 0, 0, 0, 1, 0}},  // lambda_8
    {{0, -2, 0, 0, 0, 0, 0}, {2, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, -1, 0}, {0, 0, 0, 0, 1, 0, 0}, {0, 0, 0, -1, 0, 0, 0}},  // lambda_9
    {{0, 0, -2, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {2, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, -1, 0}, {0, 0, 0, 0, 0, 0, -1}, {0, 0, 0, 1, 0, 0, 0}, {0, 0, 0, 0, 1, 0, 0}},  // lambda_10
    {{0, 0, 0, -2, 0, 0, 0}, {0, 0, 0, 0, 0, 0, -1}, {0, 0, 0, 0, 0, 1, 0}, {2, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, -1, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0}},  // lambda_11
    {{0, 0, 0, 0, -2, 0, 0}, {0, 0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 0, 0}, {2, 0, 0, 0, 0, 0, 0}, {0, -1, 0, 0, 0, 0, 0}, {0, 0, -1, 0, 0, 0, 0}},  // lambda_12
    {{0, 0, 0, 0, 0, -2, 0}, {0, 0, 0, 0, -1, 0, 0}, {0, 0, 0, -1, 0, 0, 0}, {0, 0, 1, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0}, {2, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}},  // lambda_13
    {{0, 0, 0, 0, 0, 0, -2}, {0, 0, 0, 1, 0, 0, 0}, {0, 0, 0, 0, -1, 0, 0}, {0, -1, 0, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {2, 0, 0, 0, 0, 0, 0}},  // lambda_14
};
const int kPrintedAd5[12][12] = {
    {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 1, 0, 0, 0, 3, 0, 0, 0, 0, 0},
    {-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0},
};
const int kPrintedAd11[12][12] = {
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -3, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 3, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, -3, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, -3, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0},
    {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, -2},
    {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 2, 0},
    {0, 0, -1, 0, 0, 0, 1, 0, 0, 0, 0, 0},
    {0, 1, 0, 0, 0, 0, 0, 0, -2, 0, 0, 0},
    {-1, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0},
};

constexpr cplx I1(0, 1);

std::array<cplx, 14> coeffs(std::initializer_list<std::pair<int, cplx>> terms) {
  std::array<cplx, 14> c{};
  for (const auto& [idx, v] : terms) c[static_cast<std::size_t>(idx - 1)] = v;
  return c;
}

RootFunctional rootAB(int a, int b, int sign) {
  // a alpha + b beta with alpha = (0, 2), beta = (1, -3)
  return RootFunctional{{Rational(sign * b), Rational(sign * (2 * a - 3 * b))}};
}

std::vector<RootSpaceEntry> printedSpaces() {
  return {
      {"i alpha", rootAB(1, 0, 1), coeffs({{3, 1}, {4, -2.0 * I1}, {8, 1}})},
      {"-i alpha", rootAB(1, 0, -1), coeffs({{3, 1}, {4, 2.0 * I1}, {8, 1}})},
      {"i beta", rootAB(0, 1, 1),
       coeffs({{1, I1}, {2, I1}, {6, -1}, {7, -1}, {9, -I1}, {10, -1}, {13, -1}, {14, 1}})},
      // printed with the same label i beta a second time
      {"i beta (second)", rootAB(0, 1, 1),
       coeffs({{1, I1}, {2, -I1}, {6, -1}, {7, -1}, {9, I1}, {10, -1}, {13, -1}, {14, 1}})},
      {"i(alpha+beta)", rootAB(1, 1, 1),
       coeffs({{1, 3.0 * I1}, {2, -3.0 * I1}, {6, -3}, {7, 3}, {9, I1}, {10, -I1}, {13, 1}, {14, 1}})},
      {"-i(alpha+beta)", rootAB(1, 1, -1),
       coeffs({{1, -3.0 * I1}, {2, 3.0 * I1}, {6, -3}, {7, 3}, {9, -I1}, {10, I1}, {13, 1}, {14, 1}})},
      {"i(2alpha+beta)", rootAB(2, 1, 1),
       coeffs({{1, -3.0 * I1}, {2, -3.0 * I1}, {6, 3}, {7, 3}, {9, -I1}, {10, -I1}, {12, -1}, {14, 1}})},
      {"-i(2alpha+beta)", rootAB(2, 1, -1),
       coeffs({{1, 3.0 * I1}, {2, 3.0 * I1}, {6, 3}, {7, 3}, {9, I1}, {10, I1}, {12, -1}, {14, 1}})},
      {"i(3alpha+beta)", rootAB(3, 1, 1),
       coeffs({{1, -I1}, {2, I1}, {6, 1}, {7, -1}, {9, I1}, {10, -I1}, {13, 1}, {14, 1}})},
      {"-i(3alpha+beta)", rootAB(3, 1, -1),
       coeffs({{1, I1}, {2, -I1}, {6, 1}, {7, -1}, {9, -I1}, {10, I1}, {13, 1}, {14, 1}})},
      {"i(3alpha+2beta)", rootAB(3, 2, 1), coeffs({{3, -3.0 * I1}, {8, I1}, {12, 2}})},
      {"-i(3alpha+2beta)", rootAB(3, 2, -1), coeffs({{3, 3.0 * I1}, {8, -I1}, {12, 2}})},
  };
}

std::vector<RootSpaceEntry> correctedSpaces() {
  const auto printed = printedSpaces();
  auto s = printed;
  // the alpha and 3alpha+2beta vectors carry each other's labels
  s[0].coeffs = printed[10].coeffs;
  s[1].coeffs = printed[11].coeffs;
  s[10].coeffs = printed[0].coeffs;
  s[11].coeffs = printed[1].coeffs;
  s[2].coeffs = coeffs({{1, I1}, {2, I1}, {6, -1}, {7, -1}, {9, -I1}, {10, -I1}, {13, -1}, {14, 1}});
  s[3] = {"-i beta", rootAB(0, 1, -1),
          coeffs({{1, -I1}, {2, -I1}, {6, -1}, {7, -1}, {9, I1}, {10, I1}, {13, -1}, {14, 1}})};
  s[6].coeffs = coeffs({{1, -3.0 * I1}, {2, -3.0 * I1}, {6, 3}, {7, 3}, {9, -I1}, {10, -I1}, {13, -1}, {14, 1}});
  s[7].coeffs = coeffs({{1, 3.0 * I1}, {2, 3.0 * I1}, {6, 3}, {7, 3}, {9, I1}, {10, I1}, {13, -1}, {14, 1}});
  return s;
}

CMat intMatrix(const int (&m)[7][7]) {
  CMat X(7, 7);
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c) X(r, c) = m[r][c];
  return X;
}

RMat intMatrix12(const int (&m)[12][12]) {
  RMat X(12, 12);
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c) X(r, c) = m[r][c];
  return X;
}

}  // namespace

CMat G2Context::combine(const std::array<cplx, 14>& c) const {
  CMat v = CMat::Zero(7, 7);
  for (std::size_t a = 0; a < 14; ++a) v += c[a] * lambdas[a];
  return v;
}

const G2Context& g2Context() {
  static const G2Context ctx = [] {
    G2Context c;
    for (const auto& m : kLambda) c.lambdas.push_back(intMatrix(m));
    c.sigma = CMat::Zero(7, 7);
    const double sig[7] = {1, -1, -1, 1, 1, -1, -1};
    for (int i = 0; i < 7; ++i) c.sigma(i, i) = sig[i];
    c.eta = CMat::Zero(7, 7);
    c.eta(0, 0) = -1;
    c.eta(1, 2) = c.eta(2, 1) = 1;
    c.eta(3, 3) = -1;
    c.eta(4, 4) = 1;
    c.eta(5, 6) = c.eta(6, 5) = -1;
    c.thetaMatrix = CMat::Identity(7, 7);
    for (int i = 3; i < 7; ++i) c.thetaMatrix(i, i) = -1;

    auto span = std::make_shared<const Span>(c.lambdas);
    auto g = std::make_shared<GroupSpec>();
    g->name = "G2";
    g->matrixDim = 7;
    g->algebraBasis = c.lambdas;
    g->membership.kind = PredicateKind::InGroup;
    g->membership.tolerance = 1e-10;
    g->membership.invariantAlgebra = span;
    g->membership.requireReal = true;
    g->membership.requireUnitDet = true;
    c.group = g;

    auto k = std::make_shared<GroupSpec>();
    k->name = "K";
    k->matrixDim = 7;
    for (int i : {1, 2, 3, 8, 9, 10}) k->algebraBasis.push_back(c.lambda(i));
    k->membership = g->membership;
    c.kGroup = k;

    c.cartan.theta.T = c.thetaMatrix;
    auto split = splitByInvolution(*g, c.cartan.theta);
    c.cartan.kBasis = split.kBasis;
    c.cartan.pBasis = split.pBasis;
    c.cartan.aBasis = {c.lambda(5), c.lambda(11)};
    c.cartan.positiveRoots = positiveRootsG2();
    c.cartan.regionA = regionG2();
    c.cartan.mGroup = {CMat::Identity(7, 7), c.sigma, c.eta, CMat(c.sigma * c.eta)};

    c.adBasis = {0, 1, 2, 3, 5, 6, 7, 8, 9, 11, 12, 13};
    c.printedAd5 = intMatrix12(kPrintedAd5);
    c.printedAd11 = intMatrix12(kPrintedAd11);
    c.printedRootSpaces = printedSpaces();
    c.correctedRootSpaces = correctedSpaces();
    return c;
  }();
  return ctx;
}

RMat adMatrix(const G2Context& ctx, const CMat& X) {
  std::vector<CMat> basis;
  for (int i : ctx.adBasis) basis.push_back(ctx.lambdas[static_cast<std::size_t>(i)]);
  Span s(basis);
  RMat A(12, 12);
  for (int j = 0; j < 12; ++j) {
    double res = 0;
    A.col(j) = s.coords(bracket(X, basis[static_cast<std::size_t>(j)]), &res);
    if (res > 1e-10) throw std::runtime_error("adMatrix: bracket leaves the span (residual " + std::to_string(res) + ")");
  }
  return A;
}

RootExtraction extractRoots(const G2Context& ctx) {
  const RMat A5 = adMatrix(ctx, ctx.lambda(5));
  const RMat A11 = adMatrix(ctx, ctx.lambda(11));
  // A generic combination separates the joint eigenspaces.
  const double c = 0.5772156649015329;
  Eigen::ComplexEigenSolver<CMat> es(CMat((A5 + c * A11).cast<cplx>()));
  RootExtraction out;
  for (Eigen::Index k = 0; k < es.eigenvectors().cols(); ++k) {
    const CVec v = es.eigenvectors().col(k);
    const cplx nv = v.squaredNorm();
    std::vector<Rational> coords;
    for (const RMat* A : {&A5, &A11}) {
      // ad(H) v = i r v
      const cplx lam = v.dot(A->cast<cplx>() * v) / nv;
      const double r = (lam / I1).real();
      const double scaled = r * 12;
      const long long num = std::llround(scaled);
      out.roundingResidual = std::max({out.roundingResidual, std::abs(scaled - static_cast<double>(num)) / 12, std::abs(lam.real())});
      coords.push_back(Rational(num, 12));
    }
    out.roots.push_back({coords});
  }
  if (out.roundingResidual > 1e-8) throw std::runtime_error("extractRoots: non-rational eigenvalue");
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

double rootSpaceResidual(const G2Context& ctx, const RootSpaceEntry& e) {
  const CMat v = ctx.combine(e.coeffs);
  double res = 0;
  const CMat* H[2] = {&ctx.lambda(5), &ctx.lambda(11)};
  for (int a = 0; a < 2; ++a)
    res = std::max(res, maxAbs(bracket(*H[a], v) - I1 * toDouble(e.root.coords[static_cast<std::size_t>(a)]) * v));
  return res;
}

std::vector<RootFunctional> positiveRootsG2() {
  return {rootAB(1, 0, 1), rootAB(0, 1, 1), rootAB(1, 1, 1), rootAB(2, 1, 1), rootAB(3, 1, 1), rootAB(3, 2, 1)};
}

RegionSpec regionG2() {
  RegionSpec r;
  r.dim = 2;
  r.constraints = {
      {{Rational(-1), Rational(0)}, Rational(0)},
      {{Rational(0), Rational(-1)}, Rational(0)},
      {{Rational(1), Rational(0)}, Rational(1, 2)},
      {{Rational(0), Rational(1)}, Rational(1, 2)},
      {{Rational(-1, 3), Rational(1)}, Rational(0)},
  };
  return r;
}

double jacobianG2(double y1, double y2) {
  return std::sin(y1 - 3 * y2) * std::sin(y1 - y2) * std::sin(y1 + y2) * std::sin(y1 + 3 * y2) * std::sin(2 * y1) *
         std::sin(2 * y2);
}

namespace {

struct KFactors {
  OneParameterSubgroup l2, l3, l8, l9;
};

const KFactors& kFactors() {
  static const KFactors f{OneParameterSubgroup(g2Context().lambda(2)), OneParameterSubgroup(g2Context().lambda(3)),
                          OneParameterSubgroup(g2Context().lambda(8)), OneParameterSubgroup(g2Context().lambda(9))};
  return f;
}

double kDensity(const double* p) { return std::cos(p[1]) * std::sin(p[1]) * std::cos(p[4]) * std::sin(p[4]); }

EulerChart kChart(bool reduced) {
  EulerChart c;
  c.name = reduced ? "K/M" : "K";
  c.params = {{"phi1", 0, kPi},          {"psi1", 0, reduced ? kPi / 4 : kPi / 2},
              {"omega1", 0, reduced ? kPi / 2 : kPi}, {"phi2", 0, kPi},
              {"psi2", 0, kPi / 2},      {"omega2", 0, 2 * kPi}};
  c.evaluate = [](const Params& p) { return g2KProduct(p.data()); };
  c.jacobianWeight = [](const Params& p) { return kDensity(p.data()); };
  c.group = g2Context().kGroup;
  const double s1max = reduced ? 0.5 : 1.0;  // sin^2 of the psi1 upper bound
  c.sampler = [params = c.params, s1max](std::mt19937_64& rng, Params& p) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    p.resize(6);
    for (std::size_t i = 0; i < 6; ++i) p[i] = params[i].lo + (params[i].hi - params[i].lo) * U(rng);
    p[1] = std::asin(std::sqrt(s1max * U(rng)));
    p[4] = std::asin(std::sqrt(U(rng)));
  };
  return c;
}

}  // namespace

CMat g2KProduct(const double* p) {
  const KFactors& f = kFactors();
  return f.l3(p[0]) * f.l2(p[1]) * f.l3(p[2]) * f.l8(p[3]) * f.l9(p[4]) * f.l8(p[5]);
}

EulerChart buildKChart() { return kChart(false); }
EulerChart buildKmodMChart() { return kChart(true); }

EulerChart buildG2Chart() {
  const G2Context& ctx = g2Context();
  EulerChart km = kChart(true), k = kChart(false);
  EulerChart c;
  c.name = "G2";
  for (auto p : km.params) {
    p.name = "t_" + p.name;
    c.params.push_back(p);
  }
  c.params.push_back({"y1", 0, kPi / 2});
  c.params.push_back({"y2", 0, kPi / 2});
  for (const auto& p : k.params) c.params.push_back(p);
  auto region = std::make_shared<const RegionSpec>(ctx.cartan.regionA);
  c.region = region;
  c.regionParams = {6, 7};
  c.group = ctx.group;
  const CMat L5 = ctx.lambda(5), L11 = ctx.lambda(11);
  c.factors = [region, L5, L11](const Params& p) {
    if (!region->contains({p[6], p[7]}, 1e-9)) throw RegionError("G2 chart: (y1, y2) outside the region");
    return ChartFactors{g2KProduct(p.data()), CMat(expm(p[6] * L5) * expm(p[7] * L11)), g2KProduct(p.data() + 8)};
  };
  c.evaluate = [f = c.factors](const Params& p) {
    ChartFactors fac = f(p);
    return CMat(fac.left * fac.middle * fac.right);
  };
  c.jacobianWeight = [](const Params& p) { return jacobianG2(p[6], p[7]) * kDensity(p.data()) * kDensity(p.data() + 8); };
  c.sampler = [ks = km.sampler, kk = k.sampler](std::mt19937_64& rng, Params& p) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Params a, b;
    ks(rng, a);
    kk(rng, b);
    double y1, y2;
    // uniform on the triangle, accepted with probability J <= 1
    do {
      y1 = (kPi / 2) * std::sqrt(U(rng));
      y2 = (y1 / 3) * U(rng);
    } while (U(rng) >= jacobianG2(y1, y2));
    p.assign(14, 0.0);
    std::copy(a.begin(), a.end(), p.begin());
    p[6] = y1;
    p[7] = y2;
    std::copy(b.begin(), b.end(), p.begin() + 8);
  };
  // y1 = (pi/2) u1, y2 = (y1/3) u2
  c.cubeMap = [params = c.params](const Params& u, Params& p) {
    double jac = 1;
    p.resize(14);
    for (std::size_t i = 0; i < 14; ++i) {
      p[i] = params[i].lo + (params[i].hi - params[i].lo) * u[i];
      if (i != 6 && i != 7) jac *= params[i].hi - params[i].lo;
    }
    p[6] = (kPi / 2) * u[6];
    p[7] = (p[6] / 3) * u[7];
    return jac * (kPi / 2) * (p[6] / 3);
  };
  return c;
}

}  // namespace kak
