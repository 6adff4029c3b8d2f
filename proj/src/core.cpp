#include "kak/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "kak/integrate.hpp"

namespace kak {

double toDouble(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

double GroupSpec::bracketClosureResidual() const {
  Span s(algebraBasis);
  double worst = 0;
  for (std::size_t i = 0; i < algebraBasis.size(); ++i)
    for (std::size_t j = i + 1; j < algebraBasis.size(); ++j)
      worst = std::max(worst, s.residual(bracket(algebraBasis[i], algebraBasis[j])));
  return worst;
}

double GroupSpec::gramMinEig() const { return Span(algebraBasis).gramMinEig(); }

double RootFunctional::operator()(const std::vector<double>& y) const {
  if (y.size() != coords.size()) throw DimensionError("RootFunctional: dimension mismatch");
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) s += toDouble(coords[i]) * y[i];
  return s;
}

RootFunctional RootFunctional::operator-() const {
  RootFunctional r = *this;
  for (auto& c : r.coords) c = -c;
  return r;
}

namespace {

double dotA(const LinearConstraint& c, const std::vector<double>& y) {
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) s += toDouble(c.a[i]) * y[i];
  return s;
}

double normA(const LinearConstraint& c) {
  double s = 0;
  for (const auto& v : c.a) s += toDouble(v) * toDouble(v);
  return std::sqrt(s);
}

}  // namespace

bool RegionSpec::contains(const std::vector<double>& y, double tol) const {
  if (static_cast<int>(y.size()) != dim) return false;
  for (const auto& c : constraints)
    if (dotA(c, y) > toDouble(c.piMultiple) * kPi + tol) return false;
  return true;
}

double RegionSpec::margin(const std::vector<double>& y) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : constraints) m = std::min(m, (toDouble(c.piMultiple) * kPi - dotA(c, y)) / normA(c));
  return m;
}

std::vector<std::pair<double, double>> RegionSpec::boundingBox() const {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> box(static_cast<std::size_t>(dim), {-inf, inf});
  for (const auto& c : constraints) {
    int nz = -1, count = 0;
    for (int i = 0; i < dim; ++i)
      if (c.a[static_cast<std::size_t>(i)].numerator() != 0) {
        nz = i;
        ++count;
      }
    if (count != 1) continue;
    double a = toDouble(c.a[static_cast<std::size_t>(nz)]);
    double b = toDouble(c.piMultiple) * kPi / a;
    auto& bx = box[static_cast<std::size_t>(nz)];
    if (a > 0)
      bx.second = std::min(bx.second, b);
    else
      bx.first = std::max(bx.first, b);
  }
  for (const auto& bx : box)
    if (!std::isfinite(bx.first) || !std::isfinite(bx.second)) throw RegionError("region is not box-bounded");
  return box;
}

CMat Involution::apply(const CMat& X) const { return T * X * T.inverse(); }

CartanReport validateCartan(const GroupSpec& g, const CartanData& cd) {
  CartanReport r;
  for (int k : cd.kBasis) {
    const CMat& b = g.algebraBasis[static_cast<std::size_t>(k)];
    r.thetaResidual = std::max(r.thetaResidual, maxAbs(cd.theta.apply(b) - b));
  }
  for (int p : cd.pBasis) {
    const CMat& b = g.algebraBasis[static_cast<std::size_t>(p)];
    r.thetaResidual = std::max(r.thetaResidual, maxAbs(cd.theta.apply(b) + b));
  }
  for (std::size_t i = 0; i < cd.aBasis.size(); ++i)
    for (std::size_t j = i + 1; j < cd.aBasis.size(); ++j)
      r.aCommutatorResidual = std::max(r.aCommutatorResidual, maxAbs(bracket(cd.aBasis[i], cd.aBasis[j])));
  for (const auto& m : cd.mGroup) {
    const CMat minv = m.inverse();
    for (const auto& a : cd.aBasis) r.mCentralizerResidual = std::max(r.mCentralizerResidual, maxAbs(m * a * minv - a));
    double mem = check(g.membership, m).residual;
    mem = std::max(mem, maxAbs(cd.theta.apply(m) - m));
    r.mMembershipResidual = std::max(r.mMembershipResidual, mem);
  }
  auto inList = [&](const CMat& x) {
    for (const auto& m : cd.mGroup)
      if (maxAbs(m - x) <= 1e-12) return true;
    return false;
  };
  r.mClosed = !cd.mGroup.empty();
  for (const auto& a : cd.mGroup) {
    if (!inList(a.inverse())) r.mClosed = false;
    for (const auto& b : cd.mGroup)
      if (!inList(a * b)) r.mClosed = false;
  }
  return r;
}

double EulerChart::boxVolume() const {
  double v = 1;
  for (const auto& p : params)
    if (p.hi > p.lo) v *= p.hi - p.lo;
  return v;
}

namespace {

std::vector<double> regionPart(const EulerChart& c, const Params& p) {
  std::vector<double> y;
  for (int i : c.regionParams) y.push_back(p[static_cast<std::size_t>(i)]);
  return y;
}

}  // namespace

bool EulerChart::inDomain(const Params& p, double tol) const {
  if (p.size() != params.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < params[i].lo - tol || p[i] > params[i].hi + tol) return false;
  if (region && !region->contains(regionPart(*this, p), tol)) return false;
  return true;
}

double EulerChart::boundaryDistance(const Params& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i)
    if (params[i].hi > params[i].lo) d = std::min({d, p[i] - params[i].lo, params[i].hi - p[i]});
  if (region) d = std::min(d, region->margin(regionPart(*this, p)));
  return d;
}

Params EulerChart::mapFromCube(const Params& u, double* jac) const {
  Params p(params.size());
  if (cubeMap) {
    double j = cubeMap(u, p);
    if (jac) *jac = j;
    return p;
  }
  double j = 1;
  for (std::size_t i = 0; i < params.size(); ++i) {
    p[i] = params[i].lo + (params[i].hi - params[i].lo) * u[i];
    if (params[i].hi > params[i].lo) j *= params[i].hi - params[i].lo;
  }
  if (region && !region->contains(regionPart(*this, p), 0.0)) j = 0;
  if (jac) *jac = j;
  return p;
}

double genericJacobian(const CartanData& cd, const std::vector<double>& y) {
  double J = 1;
  for (const auto& r : cd.positiveRoots) J *= std::sin(r(y));
  return J;
}

double numericDensityOracle(const EulerChart& chart, const Params& p, const DensityOptions& opt) {
  if (!chart.group) throw std::invalid_argument("numericDensityOracle: chart has no group");
  if (p.size() != chart.size()) throw DimensionError("numericDensityOracle: parameter count");
  if (!chart.inDomain(p, 0.0) || chart.boundaryDistance(p) < opt.boundaryGuard)
    throw BoundaryError("numericDensityOracle: point on or near the domain boundary");
  const auto& basis = chart.group->algebraBasis;
  const auto n = static_cast<Eigen::Index>(basis.size());
  // Gram matrix of -Tr(XY) = Re Tr(X^dagger Y) on skew-Hermitian matrices.
  RMat G(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b <= a; ++b) G(a, b) = G(b, a) = frob(basis[static_cast<std::size_t>(a)], basis[static_cast<std::size_t>(b)]);
  Eigen::LLT<RMat> llt(G);
  const RMat U = llt.matrixU();
  const CMat g = chart.evaluate(p);
  const CMat ginv = g.adjoint();
  const auto d = static_cast<Eigen::Index>(p.size());
  RMat M(n, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    auto diff = [&](double h) {
      Params a = p, b = p;
      a[static_cast<std::size_t>(i)] += h;
      b[static_cast<std::size_t>(i)] -= h;
      return CMat((chart.evaluate(a) - chart.evaluate(b)) / (2 * h));
    };
    CMat D = (4.0 * diff(opt.h / 2) - diff(opt.h)) / 3.0;
    CMat X = ginv * D;
    RVec r(n);
    for (Eigen::Index a = 0; a < n; ++a) r(a) = frob(basis[static_cast<std::size_t>(a)], X);
    RVec c = llt.solve(r);
    M.col(i) = U * c;
  }
  if (n == d) return std::abs(M.determinant());
  return std::sqrt(std::max(0.0, (M.transpose() * M).determinant()));
}

namespace {

// Integrates K parameter functionals against the chart measure; returns normalized means,
// standard errors (MC) or last-refinement deltas (quadrature).
struct ChartMulti {
  std::vector<cplx> mean;
  std::vector<double> err;
  bool monteCarlo = false;
};

ChartMulti chartMulti(const EulerChart& chart, std::size_t K, const std::function<void(const Params&, cplx*)>& fn,
                      const QuadratureSpec& spec) {
  const std::size_t d = chart.size();
  ChartMulti out;
  if (spec.method == QuadratureMethod::MonteCarlo) {
    if (spec.samples < 1) throw std::invalid_argument("zero Monte Carlo budget");
    out.monteCarlo = true;
    MultiResult m;
    if (chart.sampler && spec.useExactSampler) {
      m = monteCarlo(spec.samples, spec.seed, spec.threads, K, [&](std::mt19937_64& rng, cplx* o) {
        Params p(d);
        chart.sampler(rng, p);
        fn(p, o);
        return 1.0;
      });
    } else {
      m = monteCarlo(spec.samples, spec.seed, spec.threads, K, [&](std::mt19937_64& rng, cplx* o) {
        std::uniform_real_distribution<double> U(0.0, 1.0);
        Params u(d);
        for (auto& v : u) v = U(rng);
        double jac = 0;
        Params p = chart.mapFromCube(u, &jac);
        double w = jac == 0 ? 0.0 : jac * chart.jacobianWeight(p);
        if (w == 0)
          std::fill(o, o + K, cplx(0));
        else
          fn(p, o);
        return w;
      });
    }
    out.mean = m.weighted;
    out.err = m.sigma;
    return out;
  }
  auto run = [&](const std::vector<int>& orders) {
    MultiResult r = tensorIntegrate(orders, K, [&](const double* u, cplx* o) {
      Params uu(u, u + d);
      double jac = 0;
      Params p = chart.mapFromCube(uu, &jac);
      double w = jac == 0 ? 0.0 : jac * chart.jacobianWeight(p);
      if (w == 0)
        std::fill(o, o + K, cplx(0));
      else
        fn(p, o);
      return w;
    });
    for (auto& v : r.weighted) v /= r.weightSum;
    return r;
  };
  std::vector<int> orders, half;
  for (std::size_t a = 0; a < d; ++a) {
    orders.push_back(spec.orderFor(a));
    half.push_back(std::max(1, (spec.orderFor(a) + 1) / 2));
  }
  MultiResult fine = run(orders), coarse = run(half);
  out.mean = fine.weighted;
  for (std::size_t k = 0; k < K; ++k) out.err.push_back(std::abs(fine.weighted[k] - coarse.weighted[k]));
  return out;
}

}  // namespace

std::vector<DefectResult> haarInvarianceDefects(const EulerChart& chart, const std::vector<Translation>& hs,
                                                const GroupFunctional& f, const QuadratureSpec& spec) {
  if (!chart.group) throw std::invalid_argument("haarInvarianceDefects: chart has no group");
  MatrixPredicate pred = chart.group->membership;
  pred.tolerance = std::max(pred.tolerance, 1e-10);
  for (const auto& t : hs) {
    auto c = check(pred, t.h);
    if (!c.ok) throw MembershipError("translation is not in the group (residual " + std::to_string(c.residual) + ")");
    if (t.side == Side::Middle && !chart.factors) throw std::invalid_argument("middle translation needs chart factors");
  }
  const std::size_t K = 1 + hs.size();
  ChartMulti m = chartMulti(
      chart, K,
      [&](const Params& p, cplx* o) {
        const CMat g = chart.evaluate(p);
        const cplx base = f(g);
        o[0] = base;
        std::optional<ChartFactors> fac;
        for (std::size_t i = 0; i < hs.size(); ++i) {
          const auto& t = hs[i];
          CMat gt;
          switch (t.side) {
            case Side::Left:
              gt = t.h * g;
              break;
            case Side::Right:
              gt = g * t.h;
              break;
            case Side::Middle:
              if (!fac) fac = chart.factors(p);
              gt = fac->left * fac->middle * t.h * fac->right;
              break;
          }
          o[i + 1] = f(gt) - base;
        }
      },
      spec);
  std::vector<DefectResult> out;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    DefectResult d;
    d.base = m.mean[0];
    d.translated = m.mean[0] + m.mean[i + 1];
    d.defect = std::abs(m.mean[i + 1]);
    if (m.monteCarlo)
      d.sigma = m.err[i + 1];
    else
      d.quadratureDelta = m.err[i + 1];
    out.push_back(d);
  }
  return out;
}

DefectResult haarInvarianceDefect(const EulerChart& chart, const CMat& h, const GroupFunctional& f, Side side,
                                  const QuadratureSpec& spec) {
  return haarInvarianceDefects(chart, {Translation{h, side}}, f, spec).front();
}

InjectivityReport expInjectivityProbe(const CartanData& cd, long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("expInjectivityProbe: trials must be >= 1");
  const auto box = cd.regionA.boundingBox();
  std::mt19937_64 rng = blockRng(seed, 0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto draw = [&] {
    std::vector<double> y(box.size());
    do {
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = box[i].first + (box[i].second - box[i].first) * U(rng);
    } while (cd.regionA.margin(y) <= 1e-9);
    return y;
  };
  auto expo = [&](const std::vector<double>& y) {
    CMat H = CMat::Zero(cd.aBasis.front().rows(), cd.aBasis.front().cols());
    for (std::size_t i = 0; i < y.size(); ++i) H += y[i] * cd.aBasis[i];
    return expm(H);
  };
  InjectivityReport rep;
  rep.minSeparation = std::numeric_limits<double>::infinity();
  for (long t = 0; t < trials; ++t) {
    std::vector<double> a = draw(), b;
    double dist = 0;
    do {
      b = draw();
      dist = 0;
      for (std::size_t i = 0; i < a.size(); ++i) dist += (a[i] - b[i]) * (a[i] - b[i]);
      dist = std::sqrt(dist);
    } while (dist < 1e-3);
    double sep = (expo(a) - expo(b)).norm();
    if (sep < rep.minSeparation) {
      rep.minSeparation = sep;
      rep.worstH = a;
      rep.worstHp = b;
    }
    ++rep.trials;
  }
  return rep;
}

SplitResult splitByInvolution(const GroupSpec& g, const Involution& theta) {
  SplitResult r;
  for (std::size_t i = 0; i < g.algebraBasis.size(); ++i) {
    const CMat& b = g.algebraBasis[i];
    const CMat tb = theta.apply(b);
    const double scale = std::max(1.0, maxAbs(b));
    if (maxAbs(theta.apply(tb) - b) > 1e-12 * scale) throw std::invalid_argument("splitByInvolution: theta is not an involution");
    if (maxAbs(tb - b) <= 1e-12 * scale)
      r.kBasis.push_back(static_cast<int>(i));
    else if (maxAbs(tb + b) <= 1e-12 * scale)
      r.pBasis.push_back(static_cast<int>(i));
    else
      throw std::invalid_argument("splitByInvolution: basis not adapted to theta");
  }
  return r;
}

}  // namespace kak
