#include "kak/sun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace kak {

CMat suLambda(int N, int index) {
  if (N < 1) throw std::domain_error("suLambda: N must be >= 1");
  if (index < 0 || index > N * N - 1) throw std::out_of_range("suLambda: index out of range");
  const cplx I(0, 1);
  CMat L = CMat::Zero(N, N);
  if (index == 0) {
    L(0, 0) = I;
    return L;
  }
  // index = j^2 - 1 + k with k in 1..2j, or index = (j+1)^2 - 1 (diagonal).
  int j = 1;
  while ((j + 1) * (j + 1) - 1 < index) ++j;
  if (index == (j + 1) * (j + 1) - 1) {
    for (int a = 0; a < j; ++a) L(a, a) = I;
    L(j, j) = -I * static_cast<double>(j);
    return L;
  }
  const int k = index - (j * j - 1);
  const int c = (k + 1) / 2 - 1;  // ceil(k/2), 0-based
  if (k % 2 == 1) {
    L(c, j) = I;
    L(j, c) = I;
  } else {
    L(c, j) = 1;
    L(j, c) = -1;
  }
  return L;
}

std::vector<CMat> suBasis(int N) {
  std::vector<CMat> b;
  for (int i = 1; i < N * N; ++i) b.push_back(suLambda(N, i));
  return b;
}

std::vector<CMat> uBasis(int N) {
  std::vector<CMat> b;
  for (int i = 0; i < N * N; ++i) b.push_back(suLambda(N, i));
  return b;
}

namespace {

template <class Make>
std::shared_ptr<const GroupSpec> cached(std::map<int, std::shared_ptr<const GroupSpec>>& cache, int N, Make make) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  auto g = std::make_shared<const GroupSpec>(make());
  cache.emplace(N, g);
  return g;
}

}  // namespace

std::shared_ptr<const GroupSpec> suGroup(int N) {
  static std::map<int, std::shared_ptr<const GroupSpec>> cache;
  return cached(cache, N, [N] {
    GroupSpec g;
    g.name = "SU(" + std::to_string(N) + ")";
    g.matrixDim = N;
    g.algebraBasis = suBasis(N);
    g.membership.kind = PredicateKind::SpecialUnitary;
    return g;
  });
}

std::shared_ptr<const GroupSpec> uGroup(int N) {
  static std::map<int, std::shared_ptr<const GroupSpec>> cache;
  return cached(cache, N, [N] {
    GroupSpec g;
    g.name = "U(" + std::to_string(N) + ")";
    g.matrixDim = N;
    g.algebraBasis = uBasis(N);
    g.membership.kind = PredicateKind::Unitary;
    return g;
  });
}

bool phiIsBlockHead(int N, int i) {
  int head = 0;
  for (int size = N - 1; size >= 1; --size) {
    if (i == head) return true;
    head += size;
  }
  return false;
}

namespace {

// exp(t * lambda) for one generator: diagonal phases or a spectral one-parameter subgroup.
struct Factor {
  int param = 0;
  bool diagonal = false;
  CVec diag;  // i * d for diagonal generators
  std::shared_ptr<OneParameterSubgroup> sub;

  void apply(CMat& acc, double t) const {
    if (diagonal) {
      for (Eigen::Index c = 0; c < acc.cols(); ++c) acc.col(c) *= std::exp(t * diag(c));
    } else {
      acc = acc * (*sub)(t);
    }
  }
};

struct SuEval {
  int N = 0;
  std::vector<Factor> factors;
  bool withXi = false;

  CMat operator()(const Params& p) const {
    CMat acc = CMat::Identity(N, N);
    for (const auto& f : factors) f.apply(acc, p[static_cast<std::size_t>(f.param)]);
    if (withXi) acc.col(0) *= std::polar(1.0, p[static_cast<std::size_t>(SuNLayout{N, N * (N - 1) / 2}.xi())]);
    return acc;
  }
};

Factor makeFactor(int N, int lambdaIndex, int param) {
  Factor f;
  f.param = param;
  CMat L = suLambda(N, lambdaIndex);
  if (maxAbs(L - CMat(L.diagonal().asDiagonal())) == 0) {
    f.diagonal = true;
    f.diag = L.diagonal();
  } else {
    f.sub = std::make_shared<OneParameterSubgroup>(L);
  }
  return f;
}

// F_SU(n) embedded in the top-left block of an N x N matrix.
void appendSu(int N, int n, int phiOff, int psiOff, const SuNLayout& lay, std::vector<Factor>& out) {
  if (n <= 1) return;
  for (int k = 2; k <= n; ++k) {
    out.push_back(makeFactor(N, 3, lay.phi(phiOff + k - 2)));
    out.push_back(makeFactor(N, (k - 1) * (k - 1) + 1, lay.psi(psiOff + k - 2)));
  }
  appendSu(N, n - 1, phiOff + n - 1, psiOff + n - 1, lay, out);
  out.push_back(makeFactor(N, n * n - 1, lay.omega(n - 1)));
}

std::shared_ptr<const SuEval> makeEval(int N, bool withXi) {
  auto e = std::make_shared<SuEval>();
  e->N = N;
  e->withXi = withXi;
  SuNLayout lay{N, N * (N - 1) / 2};
  appendSu(N, N, 0, 0, lay, e->factors);
  return e;
}

std::vector<ChartParam> suParams(int N, bool reduced) {
  SuNLayout lay{N, N * (N - 1) / 2};
  std::vector<ChartParam> ps;
  for (int i = 0; i < lay.pairs; ++i)
    ps.push_back({"phi" + std::to_string(i + 1), 0.0, phiIsBlockHead(N, i) ? kPi : 2 * kPi});
  for (int i = 0; i < lay.pairs; ++i) ps.push_back({"psi" + std::to_string(i + 1), 0.0, kPi / 2});
  for (int j = 1; j <= N - 1; ++j) ps.push_back({"omega" + std::to_string(j), 0.0, (reduced ? kPi : 2 * kPi) / j});
  return ps;
}

// Exact sampler for N <= 2: phi, omega, xi uniform and psi with density sin cos.
std::function<void(std::mt19937_64&, Params&)> smallSampler(const std::vector<ChartParam>& ps, int N) {
  if (N > 2) return {};
  SuNLayout lay{N, N * (N - 1) / 2};
  return [ps, lay](std::mt19937_64& rng, Params& p) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    p.resize(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) p[i] = ps[i].lo + (ps[i].hi - ps[i].lo) * U(rng);
    for (int i = 0; i < lay.pairs; ++i) p[static_cast<std::size_t>(lay.psi(i))] = std::asin(std::sqrt(U(rng)));
  };
}

const EulerChart& suChartCached(int N) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<EulerChart>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, std::make_unique<EulerChart>(buildSuN(N))).first;
  return *it->second;
}

EulerChart buildU(int N, bool reduced) {
  if (N < 1) throw std::domain_error("U(N) chart: N must be >= 1");
  EulerChart c;
  c.name = reduced ? "U(" + std::to_string(N) + ")/Z2^" + std::to_string(N) : "U(" + std::to_string(N) + ")";
  c.params = suParams(N, reduced);
  c.params.push_back({"xi", 0.0, reduced ? kPi : 2 * kPi});
  auto ev = makeEval(N, true);
  c.evaluate = [ev](const Params& p) { return (*ev)(p); };
  c.jacobianWeight = [N](const Params& p) { return suDensity(N, p); };
  c.group = uGroup(N);
  c.sampler = smallSampler(c.params, N);
  return c;
}

}  // namespace

EulerChart buildSuN(int N) {
  if (N < 1) throw std::domain_error("buildSuN: N must be >= 1");
  EulerChart c;
  c.name = "SU(" + std::to_string(N) + ")";
  c.params = suParams(N, false);
  auto ev = makeEval(N, false);
  c.evaluate = [ev](const Params& p) { return (*ev)(p); };
  c.jacobianWeight = [N](const Params& p) { return suDensity(N, p); };
  c.group = suGroup(N);
  c.sampler = smallSampler(c.params, N);
  return c;
}

EulerChart buildUN(int N) { return buildU(N, false); }
EulerChart buildUNmodZ2N(int N) { return buildU(N, true); }

double suDensity(int N, const Params& p) {
  if (N <= 1) return 1.0;
  if (N == 2) return std::cos(p[1]) * std::sin(p[1]);
  const EulerChart& su = suChartCached(N);
  Params q(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(su.size()));
  // The density vanishes on the psi faces; step just inside so the finite differences stay in range.
  const double inset = 4e-6;
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::clamp(q[i], su.params[i].lo + inset, su.params[i].hi - inset);
  DensityOptions opt;
  opt.boundaryGuard = 2e-6;
  return numericDensityOracle(su, q, opt);
}

}  // namespace kak
