#include "kak/spn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "kak/sun.hpp"

namespace kak {

CMat spE(int N, int j) {
  if (j < 1 || j > N) throw std::out_of_range("spE: index out of range");
  CMat E = CMat::Zero(2 * N, 2 * N);
  E(j - 1, N + j - 1) = 1;
  E(N + j - 1, j - 1) = -1;
  return E;
}

CMat spEmbedK(const CMat& U) {
  const auto n = U.rows();
  CMat out = CMat::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = U;
  out.bottomRightCorner(n, n) = U.conjugate();
  return out;
}

std::vector<CMat> spBasis(int N) {
  std::vector<CMat> b;
  for (const auto& L : uBasis(N)) b.push_back(spEmbedK(L));
  const cplx I(0, 1);
  for (int j = 0; j < N; ++j)
    for (int k = j; k < N; ++k)
      for (int part = 0; part < 2; ++part) {
        CMat B = CMat::Zero(N, N);
        cplx c = part == 0 ? cplx(1) : I;
        B(j, k) = c;
        B(k, j) = c;
        CMat X = CMat::Zero(2 * N, 2 * N);
        X.topRightCorner(N, N) = B;
        X.bottomLeftCorner(N, N) = -B.conjugate();
        b.push_back(X);
      }
  return b;
}

std::shared_ptr<const GroupSpec> spGroup(int N) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const GroupSpec>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  auto g = std::make_shared<GroupSpec>();
  g->name = "Sp(" + std::to_string(N) + ")";
  g->matrixDim = 2 * N;
  g->algebraBasis = spBasis(N);
  g->innerProductScale = 4.0;
  g->membership.kind = PredicateKind::Symplectic;
  cache.emplace(N, g);
  return g;
}

double jacobianSpN(int N, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != N) throw DimensionError("jacobianSpN: need N coordinates");
  double J = 1;
  for (int j = 0; j < N; ++j) J *= std::sin(2 * y[static_cast<std::size_t>(j)]);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < i; ++k) {
      const double a = y[static_cast<std::size_t>(i)], b = y[static_cast<std::size_t>(k)];
      J *= std::sin(a - b) * std::sin(a + b);
    }
  return J;
}

RegionSpec regionSpN(int N) {
  RegionSpec r;
  r.dim = N;
  auto unit = [N](int j, long long s) {
    std::vector<Rational> a(static_cast<std::size_t>(N), Rational(0));
    a[static_cast<std::size_t>(j)] = Rational(s);
    return a;
  };
  for (int j = 0; j < N; ++j) {
    r.constraints.push_back({unit(j, -1), Rational(0)});
    r.constraints.push_back({unit(j, 1), Rational(1, 2)});
  }
  for (int j = 0; j + 1 < N; ++j) {
    auto a = unit(j, 1);
    a[static_cast<std::size_t>(j + 1)] = Rational(-1);
    r.constraints.push_back({a, Rational(0)});
  }
  return r;
}

std::vector<CMat> mGroupSpN(int N) {
  if (N < 1) throw std::domain_error("mGroupSpN: N must be >= 1");
  if (N > 20) throw std::length_error("mGroupSpN: 2^N elements exceeds the size guard");
  std::vector<CMat> out;
  for (long mask = 0; mask < (1L << N); ++mask) {
    CMat m = CMat::Zero(2 * N, 2 * N);
    for (int j = 0; j < N; ++j) {
      double e = (mask >> j) & 1 ? -1.0 : 1.0;
      m(j, j) = e;
      m(N + j, N + j) = e;
    }
    out.push_back(m);
  }
  return out;
}

std::vector<RootFunctional> positiveRootsSpN(int N) {
  std::vector<RootFunctional> roots;
  auto zero = [N] { return std::vector<Rational>(static_cast<std::size_t>(N), Rational(0)); };
  for (int j = 0; j < N; ++j) {
    auto c = zero();
    c[static_cast<std::size_t>(j)] = 2;
    roots.push_back({c});
  }
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < i; ++k)
      for (int s : {-1, 1}) {
        auto c = zero();
        c[static_cast<std::size_t>(i)] = 1;
        c[static_cast<std::size_t>(k)] = s;
        roots.push_back({c});
      }
  return roots;
}

CMat spTorus(int N, const std::vector<double>& y) {
  CMat T = CMat::Identity(2 * N, 2 * N);
  for (int j = 0; j < N; ++j) {
    const double c = std::cos(y[static_cast<std::size_t>(j)]), s = std::sin(y[static_cast<std::size_t>(j)]);
    T(j, j) = c;
    T(j, N + j) = s;
    T(N + j, j) = -s;
    T(N + j, N + j) = c;
  }
  return T;
}

const SpNContext& spnContext(int N) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<SpNContext>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return *it->second;
  if (N < 1) throw std::domain_error("spnContext: N must be >= 1");
  auto ctx = std::make_unique<SpNContext>();
  ctx->N = N;
  ctx->J = symplecticForm(N);
  for (int j = 1; j <= N; ++j) ctx->aBasis.push_back(spE(N, j));
  ctx->group = spGroup(N);
  CMat T = CMat::Zero(2 * N, 2 * N);
  T.topLeftCorner(N, N) = cplx(0, 1) * CMat::Identity(N, N);
  T.bottomRightCorner(N, N) = cplx(0, -1) * CMat::Identity(N, N);
  ctx->cartan.theta.T = T;
  auto split = splitByInvolution(*ctx->group, ctx->cartan.theta);
  ctx->cartan.kBasis = split.kBasis;
  ctx->cartan.pBasis = split.pBasis;
  ctx->cartan.aBasis = ctx->aBasis;
  ctx->cartan.positiveRoots = positiveRootsSpN(N);
  ctx->cartan.regionA = regionSpN(N);
  ctx->cartan.mGroup = mGroupSpN(N);
  ctx->kChart = std::make_shared<const EulerChart>(buildUN(N));
  ctx->kModMChart = std::make_shared<const EulerChart>(buildUNmodZ2N(N));
  return *cache.emplace(N, std::move(ctx)).first->second;
}

EulerChart buildSpNChart(int N) {
  if (N < 1) throw std::domain_error("buildSpNChart: N must be >= 1");
  const SpNContext& ctx = spnContext(N);
  const SpNLayout lay{N};
  auto kt = ctx.kModMChart;
  auto kp = ctx.kChart;
  auto region = std::make_shared<const RegionSpec>(ctx.cartan.regionA);
  EulerChart c;
  c.name = "Sp(" + std::to_string(N) + ")";
  for (auto p : kt->params) {
    p.name = "t_" + p.name;
    c.params.push_back(p);
  }
  for (int j = 1; j <= N; ++j) c.params.push_back({"y" + std::to_string(j), 0.0, kPi / 2});
  for (const auto& p : kp->params) c.params.push_back(p);
  for (int j = 0; j < N; ++j) c.regionParams.push_back(lay.y(j));
  c.region = region;
  c.group = ctx.group;

  auto split = [lay](const Params& p) {
    const auto n = static_cast<std::ptrdiff_t>(lay.uSize());
    Params t(p.begin(), p.begin() + n);
    std::vector<double> y(p.begin() + n, p.begin() + n + lay.N);
    Params q(p.begin() + n + lay.N, p.end());
    return std::make_tuple(t, y, q);
  };
  c.factors = [kt, kp, region, split, N](const Params& p) {
    auto [t, y, q] = split(p);
    if (!region->contains(y, 1e-9)) throw RegionError("Sp(N) chart: y outside the region");
    return ChartFactors{spEmbedK(kt->evaluate(t)), spTorus(N, y), spEmbedK(kp->evaluate(q))};
  };
  c.evaluate = [f = c.factors](const Params& p) {
    ChartFactors fac = f(p);
    return CMat(fac.left * fac.middle * fac.right);
  };
  c.jacobianWeight = [kt, kp, split, N](const Params& p) {
    auto [t, y, q] = split(p);
    return jacobianSpN(N, y) * kt->jacobianWeight(t) * kp->jacobianWeight(q);
  };
  if (kt->sampler && kp->sampler) {
    c.sampler = [kt, kp, lay, N](std::mt19937_64& rng, Params& p) {
      std::uniform_real_distribution<double> U(0.0, 1.0);
      p.assign(static_cast<std::size_t>(lay.size()), 0.0);
      Params t, q;
      kt->sampler(rng, t);
      kp->sampler(rng, q);
      // Uniform on the ordered simplex, accepted with probability J <= 1.
      std::vector<double> y(static_cast<std::size_t>(N));
      do {
        for (auto& v : y) v = (kPi / 2) * U(rng);
        std::sort(y.begin(), y.end());
      } while (U(rng) >= jacobianSpN(N, y));
      std::copy(t.begin(), t.end(), p.begin());
      std::copy(y.begin(), y.end(), p.begin() + lay.uSize());
      std::copy(q.begin(), q.end(), p.begin() + lay.uSize() + N);
    };
  }
  // y_N = (pi/2) u_N, y_j = y_{j+1} u_j.
  c.cubeMap = [params = c.params, lay, N](const Params& u, Params& p) {
    double jac = 1;
    p.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      p[i] = params[i].lo + (params[i].hi - params[i].lo) * u[i];
      if (static_cast<int>(i) < lay.y(0) || static_cast<int>(i) > lay.y(N - 1)) jac *= params[i].hi - params[i].lo;
    }
    double upper = kPi / 2;
    for (int j = N - 1; j >= 0; --j) {
      const auto idx = static_cast<std::size_t>(lay.y(j));
      p[idx] = upper * u[idx];
      jac *= upper;
      upper = p[idx];
    }
    return jac;
  };
  return c;
}

}  // namespace kak
