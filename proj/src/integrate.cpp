#include "kak/integrate.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace kak {

void KahanSum::add(double v) {
  double t = s + v;
  if (std::abs(s) >= std::abs(v))
    c += (s - t) + v;
  else
    c += (v - t) + s;
  s = t;
}

int QuadratureSpec::orderFor(std::size_t axis) const {
  if (axis < axisOrders.size() && axisOrders[axis] > 0) return axisOrders[axis];
  return order;
}

std::string QuadratureSpec::key() const {
  std::ostringstream os;
  os << static_cast<int>(method) << ':' << order << ':';
  for (int o : axisOrders) os << o << ',';
  os << ':' << samples << ':' << seed << ':' << useExactSampler;
  return os.str();
}

const GLRule& gaussLegendre(int n) {
  static std::mutex mu;
  static std::map<int, GLRule> cache;
  if (n < 1) throw std::invalid_argument("gaussLegendre: order must be >= 1");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GLRule r;
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double xi = 0, wi = 0;
    gsl_integration_glfixed_point(0.0, 1.0, static_cast<size_t>(i), &xi, &wi, t);
    r.x.push_back(xi);
    r.w.push_back(wi);
  }
  gsl_integration_glfixed_table_free(t);
  return cache.emplace(n, std::move(r)).first->second;
}

std::mt19937_64 blockRng(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), 0x6b616bu};
  return std::mt19937_64(seq);
}

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct ComplexSum {
  KahanSum re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

struct BlockAcc {
  long n = 0;
  double sw = 0, sw2 = 0;
  std::vector<cplx> swf, sw2f;
  std::vector<double> sw2re2, sw2im2;

  explicit BlockAcc(std::size_t K = 0) : swf(K), sw2f(K), sw2re2(K), sw2im2(K) {}

  void merge(const BlockAcc& o) {
    n += o.n;
    sw += o.sw;
    sw2 += o.sw2;
    for (std::size_t k = 0; k < swf.size(); ++k) {
      swf[k] += o.swf[k];
      sw2f[k] += o.sw2f[k];
      sw2re2[k] += o.sw2re2[k];
      sw2im2[k] += o.sw2im2[k];
    }
  }
};

BlockAcc pairwise(std::vector<BlockAcc>& blocks, std::size_t lo, std::size_t hi, std::size_t K) {
  if (hi - lo == 1) return blocks[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  BlockAcc a = pairwise(blocks, lo, mid, K);
  a.merge(pairwise(blocks, mid, hi, K));
  return a;
}

}  // namespace

MultiResult tensorIntegrate(const std::vector<int>& orders, std::size_t K, const CubeKernel& kernel) {
  const std::size_t d = orders.size();
  double total = 1;
  for (int o : orders) total *= o;
  if (total > 4e9) throw std::length_error("tensorIntegrate: grid too large");
  std::vector<const GLRule*> rules;
  for (int o : orders) rules.push_back(&gaussLegendre(o));
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> u(d);
  std::vector<cplx> out(K);
  std::vector<ComplexSum> acc(K);
  KahanSum wsum;
  long count = 0;
  for (;;) {
    double W = 1;
    for (std::size_t a = 0; a < d; ++a) {
      u[a] = rules[a]->x[idx[a]];
      W *= rules[a]->w[idx[a]];
    }
    double w = kernel(u.data(), out.data());
    if (!std::isfinite(w)) throw PoisonedIntegrandError("non-finite weight", u);
    for (std::size_t k = 0; k < K; ++k) {
      if (!finite(out[k])) throw PoisonedIntegrandError("non-finite integrand", u);
      if (w != 0) acc[k].add(W * w * out[k]);
    }
    wsum.add(W * w);
    ++count;
    std::size_t a = 0;
    while (a < d) {
      if (++idx[a] < static_cast<std::size_t>(orders[a])) break;
      idx[a] = 0;
      ++a;
    }
    if (a == d) break;
  }
  MultiResult r;
  r.count = count;
  r.weightSum = wsum.value();
  for (std::size_t k = 0; k < K; ++k) {
    r.weighted.push_back(acc[k].value());
    r.sigma.push_back(0);
  }
  return r;
}

MultiResult monteCarlo(long samples, std::uint64_t seed, int threads, std::size_t K, const SampleKernel& kernel) {
  if (samples < 1) throw std::invalid_argument("monteCarlo: samples must be >= 1");
  const long nblocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<BlockAcc> blocks(static_cast<std::size_t>(nblocks), BlockAcc(K));
  auto runBlock = [&](long b) {
    auto rng = blockRng(seed, static_cast<std::uint64_t>(b));
    const long n = std::min(kBlockSize, samples - b * kBlockSize);
    BlockAcc& acc = blocks[static_cast<std::size_t>(b)];
    std::vector<cplx> out(K);
    std::vector<ComplexSum> swf(K);
    KahanSum sw;
    for (long i = 0; i < n; ++i) {
      double w = kernel(rng, out.data());
      if (!std::isfinite(w)) throw PoisonedIntegrandError("non-finite weight", {static_cast<double>(b), static_cast<double>(i)});
      sw.add(w);
      acc.sw2 += w * w;
      for (std::size_t k = 0; k < K; ++k) {
        if (!finite(out[k]))
          throw PoisonedIntegrandError("non-finite integrand", {static_cast<double>(b), static_cast<double>(i)});
        if (w == 0) continue;
        swf[k].add(w * out[k]);
        acc.sw2f[k] += w * w * out[k];
        acc.sw2re2[k] += w * w * out[k].real() * out[k].real();
        acc.sw2im2[k] += w * w * out[k].imag() * out[k].imag();
      }
    }
    acc.n = n;
    acc.sw = sw.value();
    for (std::size_t k = 0; k < K; ++k) acc.swf[k] = swf[k].value();
  };
  threads = std::max(1, threads);
  if (threads == 1 || nblocks == 1) {
    for (long b = 0; b < nblocks; ++b) runBlock(b);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex errMu;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (long b = t; b < nblocks; b += threads) runBlock(b);
        } catch (...) {
          std::lock_guard<std::mutex> lock(errMu);
          if (!err) err = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }
  BlockAcc tot = pairwise(blocks, 0, blocks.size(), K);
  MultiResult r;
  r.count = tot.n;
  const double n = static_cast<double>(tot.n);
  r.weightSum = tot.sw / n;
  r.weightSigma = std::sqrt(std::max(0.0, tot.sw2 / n - r.weightSum * r.weightSum) / n);
  for (std::size_t k = 0; k < K; ++k) {
    if (tot.sw == 0) {
      r.weighted.push_back(std::numeric_limits<double>::quiet_NaN());
      r.sigma.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    cplx R = tot.swf[k] / tot.sw;
    double vre = tot.sw2re2[k] - 2 * R.real() * tot.sw2f[k].real() + R.real() * R.real() * tot.sw2;
    double vim = tot.sw2im2[k] - 2 * R.imag() * tot.sw2f[k].imag() + R.imag() * R.imag() * tot.sw2;
    r.weighted.push_back(R);
    r.sigma.push_back(std::sqrt(std::max(0.0, vre + vim)) / std::abs(tot.sw));
  }
  return r;
}

namespace {

std::vector<int> halved(const std::vector<int>& orders) {
  std::vector<int> h;
  for (int o : orders) h.push_back(std::max(1, (o + 1) / 2));
  return h;
}

std::mutex normMu;
std::map<std::string, std::pair<double, double>> normCache;

void storeNormalization(const EulerChart& chart, const QuadratureSpec& spec, double mass, double err) {
  std::lock_guard<std::mutex> lock(normMu);
  normCache[chart.name + "|" + spec.key()] = {mass, err};
}

}  // namespace

std::pair<double, double> chartNormalization(const EulerChart& chart, const QuadratureSpec& spec) {
  {
    std::lock_guard<std::mutex> lock(normMu);
    auto it = normCache.find(chart.name + "|" + spec.key());
    if (it != normCache.end()) return it->second;
  }
  auto r = integrateChartParams(chart, [](const Params&) { return cplx(1); }, spec);
  return {r.mass, r.massError};
}

IntegralResult integrateChartParams(const EulerChart& chart, const ParamFunctional& f, const QuadratureSpec& spec) {
  IntegralResult res;
  const std::size_t d = chart.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (spec.method == QuadratureMethod::MonteCarlo) {
    if (spec.samples < 1) throw std::invalid_argument("integrateChart: zero Monte Carlo budget");
    res.seed = spec.seed;
    res.budget = spec.samples;
    MultiResult m;
    if (chart.sampler && spec.useExactSampler) {
      m = monteCarlo(spec.samples, spec.seed, spec.threads, 1, [&](std::mt19937_64& rng, cplx* out) {
        Params p(d);
        chart.sampler(rng, p);
        out[0] = f(p);
        return 1.0;
      });
      res.mass = nan;
      res.raw = nan;
    } else {
      m = monteCarlo(spec.samples, spec.seed, spec.threads, 1, [&](std::mt19937_64& rng, cplx* out) {
        std::uniform_real_distribution<double> U(0.0, 1.0);
        Params u(d);
        for (auto& v : u) v = U(rng);
        double jac = 0;
        Params p = chart.mapFromCube(u, &jac);
        if (jac == 0) {
          out[0] = 0;
          return 0.0;
        }
        double w = jac * chart.jacobianWeight(p);
        out[0] = w == 0 ? cplx(0) : f(p);
        return w;
      });
      res.mass = m.weightSum;
      res.massError = m.weightSigma;
      res.raw = m.weighted[0] * m.weightSum;
      storeNormalization(chart, spec, res.mass, res.massError);
    }
    res.value = m.weighted[0];
    res.errorEstimate = m.sigma[0];
    return res;
  }
  std::vector<int> orders;
  for (std::size_t a = 0; a < d; ++a) orders.push_back(spec.orderFor(a));
  auto kernel = [&](const double* u, cplx* out) {
    Params uu(u, u + d);
    double jac = 0;
    Params p = chart.mapFromCube(uu, &jac);
    if (jac == 0) {
      out[0] = 0;
      return 0.0;
    }
    double w = jac * chart.jacobianWeight(p);
    out[0] = w == 0 ? cplx(0) : f(p);
    if (!std::isfinite(w) || !finite(out[0])) throw PoisonedIntegrandError("non-finite chart integrand", p);
    return w;
  };
  MultiResult fine = tensorIntegrate(orders, 1, kernel);
  MultiResult coarse = tensorIntegrate(halved(orders), 1, kernel);
  res.budget = fine.count;
  res.raw = fine.weighted[0];
  res.mass = fine.weightSum;
  res.massError = std::abs(fine.weightSum - coarse.weightSum);
  res.value = fine.weighted[0] / fine.weightSum;
  res.errorEstimate = std::abs(res.value - coarse.weighted[0] / coarse.weightSum);
  storeNormalization(chart, spec, res.mass, res.massError);
  return res;
}

IntegralResult integrateChart(const EulerChart& chart, const GroupFunctional& f, const QuadratureSpec& spec) {
  return integrateChartParams(chart, [&](const Params& p) { return f(chart.evaluate(p)); }, spec);
}

std::vector<IntegralResult> integrateChartMulti(const EulerChart& chart, const std::vector<GroupFunctional>& fs,
                                                const QuadratureSpec& spec) {
  const std::size_t d = chart.size(), K = fs.size();
  auto eval = [&](const Params& p, cplx* out) {
    const CMat g = chart.evaluate(p);
    for (std::size_t k = 0; k < K; ++k) out[k] = fs[k](g);
  };
  std::vector<IntegralResult> res(K);
  if (spec.method == QuadratureMethod::MonteCarlo) {
    if (spec.samples < 1) throw std::invalid_argument("integrateChart: zero Monte Carlo budget");
    MultiResult m;
    const bool exact = chart.sampler && spec.useExactSampler;
    if (exact) {
      m = monteCarlo(spec.samples, spec.seed, spec.threads, K, [&](std::mt19937_64& rng, cplx* out) {
        Params p(d);
        chart.sampler(rng, p);
        eval(p, out);
        return 1.0;
      });
    } else {
      m = monteCarlo(spec.samples, spec.seed, spec.threads, K, [&](std::mt19937_64& rng, cplx* out) {
        std::uniform_real_distribution<double> U(0.0, 1.0);
        Params u(d);
        for (auto& v : u) v = U(rng);
        double jac = 0;
        Params p = chart.mapFromCube(u, &jac);
        const double w = jac == 0 ? 0.0 : jac * chart.jacobianWeight(p);
        if (w == 0)
          std::fill(out, out + K, cplx(0));
        else
          eval(p, out);
        return w;
      });
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < K; ++k) {
      res[k].value = m.weighted[k];
      res[k].errorEstimate = m.sigma[k];
      res[k].budget = spec.samples;
      res[k].seed = spec.seed;
      res[k].mass = exact ? nan : m.weightSum;
      res[k].massError = exact ? nan : m.weightSigma;
      res[k].raw = exact ? cplx(nan) : m.weighted[k] * m.weightSum;
    }
    return res;
  }
  std::vector<int> orders;
  for (std::size_t a = 0; a < d; ++a) orders.push_back(spec.orderFor(a));
  auto kernel = [&](const double* u, cplx* out) {
    Params uu(u, u + d);
    double jac = 0;
    Params p = chart.mapFromCube(uu, &jac);
    const double w = jac == 0 ? 0.0 : jac * chart.jacobianWeight(p);
    if (w == 0)
      std::fill(out, out + K, cplx(0));
    else
      eval(p, out);
    if (!std::isfinite(w)) throw PoisonedIntegrandError("non-finite chart weight", p);
    return w;
  };
  MultiResult fine = tensorIntegrate(orders, K, kernel);
  MultiResult coarse = tensorIntegrate(halved(orders), K, kernel);
  for (std::size_t k = 0; k < K; ++k) {
    res[k].budget = fine.count;
    res[k].raw = fine.weighted[k];
    res[k].mass = fine.weightSum;
    res[k].massError = std::abs(fine.weightSum - coarse.weightSum);
    res[k].value = fine.weighted[k] / fine.weightSum;
    res[k].errorEstimate = std::abs(res[k].value - coarse.weighted[k] / coarse.weightSum);
  }
  return res;
}

IntegralResult integrateCubeTorus(const CubeTorusFunction& f, const CubeWeight& weight, const CubeTorusDomain& dom,
                                  const QuadratureSpec& spec) {
  const int k = dom.cubeDim, l = dom.torusDim;
  const std::size_t d = static_cast<std::size_t>(k + l);
  const double twoPi = 2 * kPi;
  auto point = [&](const double* u, double* x, double* th) {
    double jac = 1;
    if (dom.cubeMap)
      jac = dom.cubeMap(u, x);
    else
      for (int i = 0; i < k; ++i) x[i] = u[i];
    for (int j = 0; j < l; ++j) {
      th[j] = twoPi * u[k + j];
      jac *= twoPi;
    }
    return jac;
  };
  IntegralResult res;
  std::vector<double> xs(static_cast<std::size_t>(k) + 1), ths(static_cast<std::size_t>(l) + 1);
  if (spec.method == QuadratureMethod::MonteCarlo) {
    if (spec.samples < 1) throw std::invalid_argument("integrateCubeTorus: zero Monte Carlo budget");
    res.seed = spec.seed;
    res.budget = spec.samples;
    // K = 1 normalized mean plus the raw mean via the weight statistics.
    MultiResult m = monteCarlo(spec.samples, spec.seed, spec.threads, 1, [&](std::mt19937_64& rng, cplx* out) {
      std::uniform_real_distribution<double> U(0.0, 1.0);
      std::vector<double> u(d), x(static_cast<std::size_t>(k) + 1), th(static_cast<std::size_t>(l) + 1);
      for (auto& v : u) v = U(rng);
      double jac = point(u.data(), x.data(), th.data());
      double w = jac == 0 ? 0.0 : jac * weight(x.data());
      out[0] = w == 0 ? cplx(0) : f(x.data(), th.data());
      return w;
    });
    res.mass = m.weightSum;
    res.massError = m.weightSigma;
    res.raw = m.weighted[0] * m.weightSum;
    res.value = res.raw;
    // delta method on the product of two means
    res.errorEstimate = std::sqrt(std::pow(m.sigma[0] * m.weightSum, 2) + std::pow(std::abs(m.weighted[0]) * m.weightSigma, 2));
    return res;
  }
  std::vector<int> orders;
  for (std::size_t a = 0; a < d; ++a) orders.push_back(spec.orderFor(a));
  auto run = [&](const std::vector<int>& ord) {
    if (spec.method == QuadratureMethod::UniformCircle) {
      // Cube axes by Gauss-Legendre, circles by the equispaced rule.
      std::vector<int> cubeOrd(ord.begin(), ord.begin() + k);
      std::vector<int> circOrd(ord.begin() + k, ord.end());
      long circTotal = 1;
      for (int o : circOrd) circTotal *= o;
      MultiResult acc;
      acc.weighted.assign(1, 0);
      acc.sigma.assign(1, 0);
      std::vector<double> u(d);
      for (long c = 0; c < circTotal; ++c) {
        long rem = c;
        for (int j = 0; j < l; ++j) {
          u[static_cast<std::size_t>(k + j)] = static_cast<double>(rem % circOrd[static_cast<std::size_t>(j)]) / circOrd[static_cast<std::size_t>(j)];
          rem /= circOrd[static_cast<std::size_t>(j)];
        }
        MultiResult part = tensorIntegrate(cubeOrd.empty() ? std::vector<int>{1} : cubeOrd, 1, [&](const double* uc, cplx* out) {
          for (int i = 0; i < k; ++i) u[static_cast<std::size_t>(i)] = uc[i];
          double jac = point(u.data(), xs.data(), ths.data());
          double w = jac == 0 ? 0.0 : jac * weight(xs.data());
          out[0] = w == 0 ? cplx(0) : f(xs.data(), ths.data());
          return w;
        });
        acc.weighted[0] += part.weighted[0] / static_cast<double>(circTotal);
        acc.weightSum += part.weightSum / static_cast<double>(circTotal);
        acc.count += part.count;
      }
      return acc;
    }
    return tensorIntegrate(ord, 1, [&](const double* u, cplx* out) {
      double jac = point(u, xs.data(), ths.data());
      double w = jac == 0 ? 0.0 : jac * weight(xs.data());
      out[0] = w == 0 ? cplx(0) : f(xs.data(), ths.data());
      return w;
    });
  };
  MultiResult fine = run(orders);
  MultiResult coarse = run(halved(orders));
  res.budget = fine.count;
  res.raw = fine.weighted[0];
  res.value = res.raw;
  res.mass = fine.weightSum;
  res.massError = std::abs(fine.weightSum - coarse.weightSum);
  res.errorEstimate = std::abs(fine.weighted[0] - coarse.weighted[0]);
  return res;
}

namespace {

// Quaternion a + b j with j z = conj(z) j.
struct Quat {
  cplx a, b;
};

Quat qmul(const Quat& p, const Quat& q) {
  return {p.a * q.a - p.b * std::conj(q.b), p.a * q.b + p.b * std::conj(q.a)};
}
Quat qconj(const Quat& q) { return {std::conj(q.a), -q.b}; }
double qnorm2(const Quat& q) { return std::norm(q.a) + std::norm(q.b); }

}  // namespace

CMat haarSampleSpOne(int N, std::mt19937_64& rng) {
  if (N < 1 || N > 2) throw std::domain_error("haarSampleSp: N must be 1 or 2");
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<Quat>> cols(static_cast<std::size_t>(N), std::vector<Quat>(static_cast<std::size_t>(N)));
  for (auto& c : cols)
    for (auto& q : c) {
      double a = g(rng), b = g(rng), c2 = g(rng), d = g(rng);
      q = {cplx(a, b), cplx(c2, d)};
    }
  // Gram-Schmidt in the right quaternionic module: v -= e (e^dagger v).
  for (std::size_t k = 0; k < cols.size(); ++k) {
    for (std::size_t m = 0; m < k; ++m) {
      Quat ip{0, 0};
      for (std::size_t i = 0; i < cols[k].size(); ++i) {
        Quat t = qmul(qconj(cols[m][i]), cols[k][i]);
        ip.a += t.a;
        ip.b += t.b;
      }
      for (std::size_t i = 0; i < cols[k].size(); ++i) {
        Quat t = qmul(cols[m][i], ip);
        cols[k][i].a -= t.a;
        cols[k][i].b -= t.b;
      }
    }
    double nrm = 0;
    for (const auto& q : cols[k]) nrm += qnorm2(q);
    nrm = std::sqrt(nrm);
    for (auto& q : cols[k]) {
      q.a /= nrm;
      q.b /= nrm;
    }
  }
  // a + b j  ->  [[a, b], [-conj(b), conj(a)]] blockwise.
  CMat X(2 * N, 2 * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const Quat& q = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      X(i, j) = q.a;
      X(i, N + j) = q.b;
      X(N + i, j) = -std::conj(q.b);
      X(N + i, N + j) = std::conj(q.a);
    }
  return X;
}

std::vector<CMat> haarSampleSp(int N, long count, std::uint64_t seed) {
  if (N < 1 || N > 2) throw std::domain_error("haarSampleSp: N must be 1 or 2");
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(std::max(0L, count)));
  for (long b = 0; b * kBlockSize < count; ++b) {
    auto rng = blockRng(seed, static_cast<std::uint64_t>(b));
    for (long i = b * kBlockSize; i < std::min(count, (b + 1) * kBlockSize); ++i) out.push_back(haarSampleSpOne(N, rng));
  }
  return out;
}

}  // namespace kak
