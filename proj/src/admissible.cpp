#include "kak/admissible.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace kak {

std::vector<ExponentVec> AdmissibleFunction::spectrum() const {
  std::vector<ExponentVec> s;
  for (const auto& [m, poly] : terms)
    if (!poly.empty()) s.push_back(m);
  return s;
}

std::size_t AdmissibleFunction::termCount() const {
  std::size_t n = 0;
  for (const auto& t : terms) n += t.second.size();
  return n;
}

namespace {

void validateShape(const AdmissibleFunction& f) {
  if (f.N < 1) throw AdmissibilityError("admissibility bound N must be >= 1");
  if (f.k < 0 || f.l < 0) throw AdmissibilityError("negative dimension");
  if (!f.sqrtScale.empty() && static_cast<int>(f.sqrtScale.size()) != f.k)
    throw AdmissibilityError("sqrt_scale must have one entry per cube variable");
  for (double kap : f.sqrtScale)
    if (!(kap > 0 && kap <= 1)) throw AdmissibilityError("sqrt_scale entries must lie in (0, 1]");
  for (const auto& [m, poly] : f.terms) {
    if (static_cast<int>(m.size()) != f.l) throw AdmissibilityError("exponent vector length differs from l");
    for (const auto& [mono, c] : poly) {
      if (static_cast<int>(mono.xpow.size()) != f.k || static_cast<int>(mono.spow.size()) != f.k)
        throw AdmissibilityError("monomial length differs from k");
      for (int v : mono.xpow)
        if (v < 0) throw AdmissibilityError("negative x power");
      for (int v : mono.spow)
        if (v < 0) throw AdmissibilityError("negative s power");
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw AdmissibilityError("non-finite coefficient");
    }
  }
}

// s_i^2 = 1 - kappa_i x_i^2, applied until every s power is 0 or 1.
void reduceInto(Monomial mono, cplx c, const AdmissibleFunction& f, CoefficientPoly& out) {
  for (std::size_t i = 0; i < mono.spow.size(); ++i) {
    if (mono.spow[i] >= 2) {
      mono.spow[i] -= 2;
      reduceInto(mono, c, f, out);
      mono.xpow[i] += 2;
      reduceInto(mono, -f.kappa(static_cast<int>(i)) * c, f, out);
      return;
    }
  }
  out[mono] += c;
}

AdmissibleFunction canonicalImpl(const AdmissibleFunction& f, bool audit) {
  validateShape(f);
  AdmissibleFunction g;
  g.N = f.N;
  g.k = f.k;
  g.l = f.l;
  g.sqrtScale = f.sqrtScale;
  double maxAbsCoeff = 0;
  for (const auto& [m, poly] : f.terms) {
    CoefficientPoly red;
    for (const auto& [mono, c] : poly) reduceInto(mono, c, f, red);
    for (const auto& [mono, c] : red) maxAbsCoeff = std::max(maxAbsCoeff, std::abs(c));
    g.terms[m] = std::move(red);
  }
  const double cut = 1e-13 * maxAbsCoeff;
  for (auto it = g.terms.begin(); it != g.terms.end();) {
    auto& poly = it->second;
    for (auto jt = poly.begin(); jt != poly.end();) {
      if (std::abs(jt->second) <= cut || jt->second == cplx(0))
        jt = poly.erase(jt);
      else
        ++jt;
    }
    if (poly.empty())
      it = g.terms.erase(it);
    else
      ++it;
  }
  if (audit && !denominatorAudit(g, g.N))
    throw AdmissibilityError("exponent denominator exceeds the admissibility bound " + std::to_string(g.N));
  return g;
}

}  // namespace

AdmissibleFunction canonicalize(const AdmissibleFunction& f) { return canonicalImpl(f, true); }

long long maxDenominator(const AdmissibleFunction& f) {
  long long d = 1;
  for (const auto& [m, poly] : f.terms)
    for (const auto& r : m) d = std::max(d, r.denominator());
  return d;
}

bool denominatorAudit(const AdmissibleFunction& f, int bound) { return maxDenominator(f) <= bound; }

cplx evaluatePoly(const CoefficientPoly& c, const double* x, const std::vector<double>& kappa) {
  cplx sum = 0;
  for (const auto& [mono, coef] : c) {
    double v = 1;
    for (std::size_t i = 0; i < mono.xpow.size(); ++i) {
      if (mono.xpow[i]) v *= std::pow(x[i], mono.xpow[i]);
      if (mono.spow[i]) {
        const double kap = kappa.empty() ? 1.0 : kappa[i];
        v *= std::pow(std::sqrt(std::max(0.0, 1 - kap * x[i] * x[i])), mono.spow[i]);
      }
    }
    sum += coef * v;
  }
  return sum;
}

cplx evaluate(const AdmissibleFunction& f, const std::vector<double>& x, const std::vector<double>& theta) {
  if (static_cast<int>(x.size()) != f.k || static_cast<int>(theta.size()) != f.l)
    throw DimensionError("evaluate: argument lengths differ from (k, l)");
  for (double v : x)
    if (!(v >= 0 && v <= 1)) throw std::domain_error("evaluate: x outside [0, 1]");
  cplx sum = 0;
  for (const auto& [m, poly] : f.terms) {
    double phase = 0;
    for (std::size_t j = 0; j < m.size(); ++j) phase += toDouble(m[j]) * theta[j];
    sum += evaluatePoly(poly, x.data(), f.sqrtScale) * std::polar(1.0, phase);
  }
  return sum;
}

AdmissibleFunction multiply(const AdmissibleFunction& a, const AdmissibleFunction& b, std::size_t guard) {
  if (a.k != b.k || a.l != b.l) throw DimensionError("multiply: shapes differ");
  if (a.sqrtScale != b.sqrtScale) throw std::invalid_argument("multiply: sqrt scales differ");
  if (a.termCount() * b.termCount() > guard) throw PowerOverflowError("multiply: product exceeds the size guard");
  AdmissibleFunction r;
  r.k = a.k;
  r.l = a.l;
  r.sqrtScale = a.sqrtScale;
  r.N = std::max(a.N, b.N);
  for (const auto& [ma, pa] : a.terms)
    for (const auto& [mb, pb] : b.terms) {
      ExponentVec m(ma.size());
      for (std::size_t j = 0; j < m.size(); ++j) m[j] = ma[j] + mb[j];
      auto& dst = r.terms[m];
      for (const auto& [xa, ca] : pa)
        for (const auto& [xb, cb] : pb) {
          Monomial mono{xa.xpow, xa.spow};
          for (std::size_t i = 0; i < mono.xpow.size(); ++i) {
            mono.xpow[i] += xb.xpow[i];
            mono.spow[i] += xb.spow[i];
          }
          dst[mono] += ca * cb;
        }
    }
  // Sums of fractions can need a larger denominator than either factor.
  r.N = std::max<long long>(r.N, maxDenominator(r));
  return canonicalImpl(r, false);
}

AdmissibleFunction powerExpand(const AdmissibleFunction& f, int P, std::size_t guard) {
  if (P < 1) throw std::invalid_argument("powerExpand: P must be >= 1");
  AdmissibleFunction base = canonicalImpl(f, false);
  if (static_cast<std::size_t>(P) * std::max<std::size_t>(1, base.termCount()) > guard)
    throw PowerOverflowError("powerExpand: P times term count exceeds the size guard");
  AdmissibleFunction acc = base;
  for (int p = 1; p < P; ++p) {
    acc = multiply(acc, base, guard);
    if (acc.termCount() > guard) throw PowerOverflowError("powerExpand: expansion exceeds the size guard");
  }
  return acc;
}

cplx torusIntegral(const Rational& m) {
  if (m == 0) return 2 * kPi;
  if (m.denominator() == 1) return 0;
  const double mm = toDouble(m);
  return (std::polar(1.0, 2 * kPi * mm) - 1.0) / cplx(0, mm);
}

double WeightSpec::operator()(const double* x) const {
  double w = 1;
  std::vector<double> xg;
  for (const auto& f : factors) {
    xg.clear();
    for (int v : f.vars) xg.push_back(x[v]);
    w *= f.w(xg.data());
  }
  return w;
}

namespace {

// u(2 - u): flattens sqrt(1 - x^2) endpoint behaviour at x = 1.
double smoothMap(double u, double* jac) {
  *jac = 2 * (1 - u);
  return u * (2 - u);
}

}  // namespace

CubeTorusDomain WeightSpec::domain(int l) const {
  CubeTorusDomain d;
  d.cubeDim = k;
  d.torusDim = l;
  auto facs = factors;
  const int kk = k;
  d.cubeMap = [facs, kk](const double* u, double* x) {
    std::vector<bool> used(static_cast<std::size_t>(kk), false);
    double jac = 1;
    std::vector<double> ug, xg;
    for (const auto& f : facs) {
      ug.clear();
      for (int v : f.vars) {
        ug.push_back(u[v]);
        used[static_cast<std::size_t>(v)] = true;
      }
      xg.assign(f.vars.size(), 0.0);
      if (f.map) {
        jac *= f.map(ug.data(), xg.data());
      } else {
        for (std::size_t i = 0; i < ug.size(); ++i) {
          double j = 1;
          xg[i] = smoothMap(ug[i], &j);
          jac *= j;
        }
      }
      for (std::size_t i = 0; i < f.vars.size(); ++i) x[f.vars[i]] = xg[i];
    }
    for (int v = 0; v < kk; ++v)
      if (!used[static_cast<std::size_t>(v)]) x[v] = u[v];
    return jac;
  };
  return d;
}

std::string toString(ScanStatus s) {
  switch (s) {
    case ScanStatus::Consistent:
      return "consistent";
    case ScanStatus::HypothesisNotMet:
      return "hypothesis-not-met";
    case ScanStatus::PotentialCounterexample:
      return "potential-counterexample";
    case ScanStatus::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// Quadrature nodes of one weight group: points and (signed, absolute) weights.
struct GroupNodes {
  std::vector<int> vars;
  std::vector<std::vector<double>> x;
  std::vector<double> w, wabs;
};

GroupNodes buildNodes(const WeightFactor& f, int order) {
  GroupNodes g;
  g.vars = f.vars;
  const auto d = f.vars.size();
  const GLRule& r = gaussLegendre(order);
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> u(d), xg(d);
  for (;;) {
    double W = 1;
    for (std::size_t a = 0; a < d; ++a) {
      u[a] = r.x[idx[a]];
      W *= r.w[idx[a]];
    }
    double jac = 1;
    if (f.map) {
      jac = f.map(u.data(), xg.data());
    } else {
      for (std::size_t a = 0; a < d; ++a) {
        double j = 1;
        xg[a] = smoothMap(u[a], &j);
        jac *= j;
      }
    }
    const double w = jac == 0 ? 0.0 : W * jac * f.w(xg.data());
    if (!std::isfinite(w)) throw PoisonedIntegrandError("non-finite weight", xg);
    g.x.push_back(xg);
    g.w.push_back(w);
    g.wabs.push_back(std::abs(w));
    std::size_t a = 0;
    while (a < d) {
      if (++idx[a] < static_cast<std::size_t>(order)) break;
      idx[a] = 0;
      ++a;
    }
    if (a == d || d == 0) break;
  }
  return g;
}

class FactorizedIntegrator {
 public:
  FactorizedIntegrator(const WeightSpec& ws, int order, const std::vector<double>& kappa) : kappa_(kappa) {
    std::vector<bool> used(static_cast<std::size_t>(ws.k), false);
    for (const auto& f : ws.factors) {
      for (int v : f.vars) used[static_cast<std::size_t>(v)] = true;
      const int n = f.order > 0 ? f.order : order;
      fine_.push_back(buildNodes(f, n));
      coarse_.push_back(buildNodes(f, std::max(1, (n + 1) / 2)));
    }
    for (int v = 0; v < ws.k; ++v)
      if (!used[static_cast<std::size_t>(v)]) {
        WeightFactor f{{v}, [](const double*) { return 1.0; }, {}, 0};
        fine_.push_back(buildNodes(f, order));
        coarse_.push_back(buildNodes(f, std::max(1, (order + 1) / 2)));
      }
  }

  // (fine, coarse, fine with |w|) integrals of one monomial
  std::array<double, 3> monomial(const Monomial& m) {
    auto it = cache_.find(m);
    if (it != cache_.end()) return it->second;
    std::array<double, 3> r{1, 1, 1};
    for (std::size_t g = 0; g < fine_.size(); ++g) {
      std::vector<int> key;
      for (int v : fine_[g].vars) {
        key.push_back(m.xpow[static_cast<std::size_t>(v)]);
        key.push_back(m.spow[static_cast<std::size_t>(v)]);
      }
      auto gk = std::make_pair(g, key);
      auto jt = groupCache_.find(gk);
      if (jt == groupCache_.end()) {
        std::array<double, 3> v{integrate(fine_[g], m, false), integrate(coarse_[g], m, false), integrate(fine_[g], m, true)};
        jt = groupCache_.emplace(gk, v).first;
      }
      for (int a = 0; a < 3; ++a) r[static_cast<std::size_t>(a)] *= jt->second[static_cast<std::size_t>(a)];
    }
    cache_[m] = r;
    return r;
  }

 private:
  double integrate(const GroupNodes& g, const Monomial& m, bool absolute) const {
    KahanSum s;
    for (std::size_t n = 0; n < g.x.size(); ++n) {
      double v = absolute ? g.wabs[n] : g.w[n];
      if (v == 0) continue;
      for (std::size_t a = 0; a < g.vars.size(); ++a) {
        const auto var = static_cast<std::size_t>(g.vars[a]);
        const double x = g.x[n][a];
        if (m.xpow[var]) v *= std::pow(x, m.xpow[var]);
        if (m.spow[var]) v *= std::sqrt(std::max(0.0, 1 - (kappa_.empty() ? 1.0 : kappa_[var]) * x * x));
      }
      s.add(v);
    }
    return s.value();
  }

  std::vector<double> kappa_;
  std::vector<GroupNodes> fine_, coarse_;
  std::map<Monomial, std::array<double, 3>> cache_;
  std::map<std::pair<std::size_t, std::vector<int>>, std::array<double, 3>> groupCache_;
};

MomentEntry analyticMoment(const AdmissibleFunction& fp, FactorizedIntegrator& integ) {
  MomentEntry e;
  e.method = "analytic-torus+gauss-legendre";
  cplx fine = 0, coarse = 0;
  double scale = 0;
  for (const auto& [m, poly] : fp.terms) {
    cplx T = 1;
    double Tabs = 1;
    for (const auto& r : m) {
      const cplx t = torusIntegral(r);
      T *= t;
      // reference magnitude uses the full circle measure
      Tabs *= 2 * kPi;
    }
    double polyAbs = 0;
    cplx pf = 0, pc = 0;
    for (const auto& [mono, c] : poly) {
      auto v = integ.monomial(mono);
      polyAbs += std::abs(c) * v[2];
      if (T != cplx(0)) {
        pf += c * v[0];
        pc += c * v[1];
      }
    }
    scale += Tabs * polyAbs;
    fine += T * pf;
    coarse += T * pc;
  }
  e.value = fine;
  e.error = std::abs(fine - coarse);
  e.scale = scale;
  return e;
}

MomentEntry monteCarloMoment(const AdmissibleFunction& f, int P, const WeightSpec& ws, const MomentBudget& b) {
  MomentEntry e;
  e.method = "monte-carlo";
  const CubeTorusDomain dom = ws.domain(f.l);
  const int k = f.k, l = f.l;
  MultiResult r = monteCarlo(b.samples, b.seed + static_cast<std::uint64_t>(P) * 0x9E3779B97F4A7C15ULL, b.threads, 2,
                             [&](std::mt19937_64& rng, cplx* out) {
                               std::uniform_real_distribution<double> U(0.0, 1.0);
                               std::vector<double> u(static_cast<std::size_t>(k + l)), x(static_cast<std::size_t>(k)),
                                   th(static_cast<std::size_t>(l));
                               for (auto& v : u) v = U(rng);
                               double jac = dom.cubeMap ? dom.cubeMap(u.data(), x.data()) : 1.0;
                               if (!dom.cubeMap) std::copy(u.begin(), u.begin() + k, x.begin());
                               for (int j = 0; j < l; ++j) th[static_cast<std::size_t>(j)] = 2 * kPi * u[static_cast<std::size_t>(k + j)];
                               const double w = jac * std::pow(2 * kPi, l) * ws(x.data());
                               if (w == 0) {
                                 out[0] = out[1] = 0;
                                 return 0.0;
                               }
                               const cplx v = std::pow(evaluate(f, x, th), P);
                               out[0] = v * (w < 0 ? -1.0 : 1.0);
                               out[1] = std::abs(v);
                               return std::abs(w);
                             });
  // raw integrals: mean(|w| g) = weighted mean * mean |w|
  e.value = r.weighted[0] * r.weightSum;
  e.error = std::hypot(r.sigma[0] * r.weightSum, std::abs(r.weighted[0]) * r.weightSigma);
  e.scale = std::abs(r.weighted[1]) * r.weightSum;
  return e;
}

}  // namespace

std::vector<MomentEntry> weightedMoments(const AdmissibleFunction& fin, const WeightSpec& weight, int Pmax,
                                         const MomentBudget& budget) {
  if (Pmax < 1) throw std::invalid_argument("Pmax must be >= 1");
  const AdmissibleFunction f = canonicalImpl(fin, false);
  if (weight.k != f.k) throw DimensionError("weight dimension differs from k");
  std::vector<MomentEntry> out;
  std::optional<FactorizedIntegrator> integ;
  if (budget.order > 0) integ.emplace(weight, budget.order, f.sqrtScale);
  std::optional<AdmissibleFunction> power;
  bool overflow = false;
  for (int P = 1; P <= Pmax; ++P) {
    MomentEntry e;
    if (!overflow && budget.order > 0) {
      try {
        power = P == 1 ? f : multiply(*power, f, budget.guard);
        if (power->termCount() > budget.guard) throw PowerOverflowError("size guard");
      } catch (const PowerOverflowError&) {
        overflow = true;
      }
    }
    if (!overflow && budget.order > 0) {
      e = analyticMoment(*power, *integ);
      e.zero = std::abs(e.value) <= 1e-9 * e.scale + 3 * e.error;
      e.decided = !e.zero || e.error <= 1e-6 * std::max(e.scale, 1e-300);
    } else if (budget.samples > 0) {
      e = monteCarloMoment(f, P, weight, budget);
      e.zero = std::abs(e.value) <= 3 * e.error;
      e.decided = !e.zero || e.error <= 1e-3 * std::max(e.scale, 1e-300);
    } else {
      e.method = "none";
      e.decided = false;
    }
    e.P = P;
    out.push_back(e);
  }
  return out;
}

ScanReport momentScan(const AdmissibleFunction& fin, const WeightSpec& weight, int Pmax, const MomentBudget& budget) {
  if (Pmax < 1) throw std::invalid_argument("momentScan: Pmax must be >= 1");
  const AdmissibleFunction f = canonicalImpl(fin, false);
  ScanReport rep;
  rep.budget = budget;
  const auto spec = f.spectrum();
  rep.hullContainsZero = spec.empty() ? true : zeroInHull(spec);
  if (budget.order <= 0 && budget.samples <= 0) {
    rep.status = ScanStatus::Inconclusive;
    return rep;
  }
  rep.moments = weightedMoments(f, weight, Pmax, budget);
  bool anyNonzero = false, anyUndecided = false;
  for (const auto& e : rep.moments) {
    if (!e.decided) anyUndecided = true;
    else if (!e.zero) anyNonzero = true;
  }
  if (anyNonzero)
    rep.status = ScanStatus::HypothesisNotMet;
  else if (anyUndecided)
    rep.status = ScanStatus::Inconclusive;
  else
    rep.status = rep.hullContainsZero ? ScanStatus::PotentialCounterexample : ScanStatus::Consistent;
  return rep;
}

std::string fracToString(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parseFrac(const std::string& s) {
  auto slash = s.find('/');
  std::size_t used = 0;
  try {
    if (slash == std::string::npos) {
      long long n = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Rational(n);
    }
    long long n = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(s);
    const std::string ds = s.substr(slash + 1);
    long long d = std::stoll(ds, &used);
    if (used != ds.size() || d <= 0) throw std::invalid_argument(s);
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("not an exact fraction: \"" + s + "\"");
  }
}

namespace {

std::pair<long, long> lineCol(const std::string& text, std::size_t byte) {
  long line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Locate the first occurrence of a key path in the text for error positions.
std::pair<long, long> locate(const std::string& text, const std::string& key) {
  auto pos = text.find("\"" + key + "\"");
  return lineCol(text, pos == std::string::npos ? 0 : pos);
}

}  // namespace

AdmissibleFunction parseAdmissible(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = lineCol(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(std::string("malformed JSON: ") + e.what(), line, col);
  }
  auto fail = [&](const std::string& what, const std::string& key) {
    auto [line, col] = locate(text, key);
    throw ParseError(what, line, col);
  };
  AdmissibleFunction f;
  try {
    for (const char* key : {"N", "k", "l", "terms"})
      if (!j.contains(key)) fail(std::string("missing field ") + key, key);
    f.N = j.at("N").get<int>();
    f.k = j.at("k").get<int>();
    f.l = j.at("l").get<int>();
    if (j.contains("sqrt_scale")) f.sqrtScale = j.at("sqrt_scale").get<std::vector<double>>();
    std::size_t ti = 0;
    for (const auto& t : j.at("terms")) {
      const std::string where = "terms[" + std::to_string(ti++) + "]";
      if (!t.contains("exponents") || !t.contains("poly")) fail(where + ": needs exponents and poly", "terms");
      ExponentVec m;
      for (const auto& e : t.at("exponents")) {
        if (!e.is_string()) fail(where + ": exponents must be \"p/q\" strings", "exponents");
        try {
          m.push_back(parseFrac(e.get<std::string>()));
        } catch (const std::invalid_argument& ex) {
          fail(where + ": " + ex.what(), "exponents");
        }
      }
      auto& poly = f.terms[m];
      for (const auto& pe : t.at("poly")) {
        Monomial mono{pe.at("xpow").get<std::vector<int>>(), pe.at("spow").get<std::vector<int>>()};
        const auto c = pe.at("coeff").get<std::vector<double>>();
        if (c.size() != 2) fail(where + ": coeff must be [re, im]", "coeff");
        poly[mono] += cplx(c[0], c[1]);
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad field type: ") + e.what(), 0, 0);
  }
  try {
    return canonicalize(f);
  } catch (const AdmissibilityError& e) {
    auto [line, col] = locate(text, "terms");
    throw ParseError(e.what(), line, col);
  }
}

std::string serializeAdmissible(const AdmissibleFunction& f) {
  using nlohmann::json;
  json j;
  j["N"] = f.N;
  j["k"] = f.k;
  j["l"] = f.l;
  if (!f.sqrtScale.empty()) j["sqrt_scale"] = f.sqrtScale;
  json terms = json::array();
  for (const auto& [m, poly] : f.terms) {
    json t;
    json ex = json::array();
    for (const auto& r : m) ex.push_back(fracToString(r));
    t["exponents"] = ex;
    json ps = json::array();
    for (const auto& [mono, c] : poly) ps.push_back({{"xpow", mono.xpow}, {"spow", mono.spow}, {"coeff", {c.real(), c.imag()}}});
    t["poly"] = ps;
    terms.push_back(t);
  }
  j["terms"] = terms;
  return j.dump(2);
}

}  // namespace kak
