// One line per acceptance criterion; exit status 1 when any criterion fails.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>

#include "kak/g2.hpp"
#include "kak/spn.hpp"
#include "kak/suites.hpp"
#include "kak/transform.hpp"

using namespace kak;
using nlohmann::json;

namespace {

// pinned tolerances
constexpr double kClosureTol = 1e-10;
constexpr double kAdTol = 1e-12;
constexpr double kRootSpaceTol = 1e-10;
constexpr double kJacobianTol = 1e-13;
constexpr double kDensitySpreadTol = 1e-5;
constexpr double kQuadTol = 1e-6;
constexpr double kSigmas = 3;
constexpr double kG2BandTol = 2e-3;
constexpr double kSpreadTol = 1e-3;
constexpr double kWeightRelTol = 1e-10;
constexpr double kCubicTol = 1e-14;
constexpr double kWallMargin = 1e-4;
constexpr double kRuntime = 1.0;  // seconds, criteria 1 and 2
constexpr long kSamples = 1000000;

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s  %2d  %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const json& check(const json& rep, const std::string& name) {
  for (const auto& c : rep.at("checks"))
    if (c.at("name") == name) return c;
  throw std::runtime_error("missing check " + name);
}

bool allPass(const json& rep, const std::string& prefix, double* worstRatio = nullptr) {
  bool ok = true;
  double w = 0;
  for (const auto& c : rep.at("checks")) {
    const std::string n = c.at("name");
    if (n.rfind(prefix, 0) != 0 || c.at("status") == "info") continue;
    ok = ok && c.at("status") == "pass";
    const double tol = c.at("tolerance");
    if (tol > 0) w = std::max(w, c.at("value").get<double>() / tol);
  }
  if (worstRatio) *worstRatio = w;
  return ok;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& ctx = g2Context();
  const double gram = ctx.group->gramMinEig(), closure = ctx.group->bracketClosureResidual();
  const RMat a5 = adMatrix(ctx, ctx.lambda(5)), a11 = adMatrix(ctx, ctx.lambda(11));
  const double d = std::max((a5 - ctx.printedAd5).cwiseAbs().maxCoeff(), (a11 - ctx.printedAd11).cwiseAbs().maxCoeff());
  const bool exact = (a5.array().round() == ctx.printedAd5.array()).all() && (a11.array().round() == ctx.printedAd11.array()).all();
  const double t = seconds(t0);
  report(1, gram > 1e-8 && closure <= kClosureTol && d <= kAdTol && exact && t < kRuntime, "g2 structure exactness",
         fmt("gram min eig %.3g, closure %.3g (tol 1e-10), ad deviation %.3g", gram, closure, d) +
             (exact ? ", integer entries equal" : ", integer entries differ") + fmt(", %.3f s", t));
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& ctx = g2Context();
  const auto ex = extractRoots(ctx);
  const RootFunctional a{{Rational(0), Rational(2)}}, b{{Rational(1), Rational(-3)}};
  auto add = [](const RootFunctional& x, const RootFunctional& y, int p, int q) {
    RootFunctional r;
    for (std::size_t i = 0; i < x.coords.size(); ++i) r.coords.push_back(Rational(p) * x.coords[i] + Rational(q) * y.coords[i]);
    return r;
  };
  std::vector<RootFunctional> want;
  for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {1, 1}, {2, 1}, {3, 1}, {3, 2}}) {
    want.push_back(add(a, b, p, q));
    want.push_back(-add(a, b, p, q));
  }
  std::sort(want.begin(), want.end());
  const bool roots = ex.roots == want;
  int bad = 0;
  double worst = 0;
  std::string badLabels;
  for (const auto& e : ctx.printedRootSpaces) {
    const double r = rootSpaceResidual(ctx, e);
    worst = std::max(worst, r);
    if (r > kRootSpaceTol) {
      ++bad;
      badLabels += (badLabels.empty() ? "" : ", ") + e.label;
    }
  }
  double corrected = 0;
  for (const auto& e : ctx.correctedRootSpaces) corrected = std::max(corrected, rootSpaceResidual(ctx, e));
  const double t = seconds(t0);
  report(2, roots && bad == 0 && t < kRuntime, "root recovery and typeset root vectors",
         std::string(roots ? "roots = +-{a, b, a+b, 2a+b, 3a+b, 3a+2b}" : "roots differ") + "; " + std::to_string(bad) + "/" +
             std::to_string(ctx.printedRootSpaces.size()) + " typeset vectors off (max residual " + fmt("%.3g", worst) +
             ", tol 1e-10: " + badLabels + "); corrected vectors max residual " + fmt("%.3g", corrected) + fmt(", %.3f s", t));
}

void criterion3() {
  bool ok = true;
  std::string detail;
  for (const std::string g : {"g2", "spn:1", "spn:2", "spn:3"}) {
    SuiteConfig cfg;
    cfg.group = g == "g2" ? "g2" : "spn";
    cfg.N = g == "g2" ? 1 : g.back() - '0';
    cfg.seed = 101;
    const auto r = runSuite("jacobian", cfg);
    const auto& c1 = check(r.report, "closed form vs product over positive roots (1000 points)");
    const auto& c2 = check(r.report, "numeric density / closed form is constant (100 points, relative spread)");
    const bool pass = c1.at("value").get<double>() <= kJacobianTol && c2.at("value").get<double>() <= kDensitySpreadTol;
    ok = ok && pass;
    detail += (detail.empty() ? "" : "; ") + g + fmt(" product %.2g, spread %.2g", c1.at("value"), c2.at("value"));
  }
  report(3, ok, "Jacobian: closed form vs root product (1e-13) and vs numeric density (spread 1e-5)", detail);
}

json haarG2, haarSp1, haarSp2;

void runHaar() {
  SuiteConfig cfg;
  cfg.samples = kSamples;
  cfg.order = 40;
  cfg.seed = 202;
  cfg.group = "spn";
  cfg.N = 1;
  haarSp1 = runSuite("haar", cfg).report;
  cfg.N = 2;
  haarSp2 = runSuite("haar", cfg).report;
  cfg.group = "g2";
  haarG2 = runSuite("haar", cfg).report;
}

void criterion4() {
  const json& s1 = check(haarSp1, "chart moment |g11|^2");
  const json& s2 = check(haarSp2, "chart moment |g11|^2");
  const json& g = check(haarG2, "chart moment |g11|^2");
  const double b = 3 * g.at("error").get<double>();
  const bool ok = s1.at("value").get<double>() <= kQuadTol && s2.at("value").get<double>() <= kSigmas * s2.at("error").get<double>() &&
                  g.at("value").get<double>() <= kSigmas * g.at("error").get<double>() && b <= kG2BandTol;
  report(4, ok, "Schur moment E|g11|^2 = 1/d",
         fmt("Sp(1) order 40 deviation %.3g (tol 1e-6); Sp(2) %.3g vs 3 sigma %.3g; ", s1.at("value"), s2.at("value"),
             3 * s2.at("error").get<double>()) +
             fmt("G2 %.3g vs 3 sigma %.3g (band tol 2e-3)", g.at("value"), b));
}

void criterion5() {
  bool ok = true;
  for (const json* r : {&haarSp1, &haarSp2, &haarG2})
    for (const char* side : {"left", "right", "middle"}) ok = allPass(*r, side) && ok;
  double m1 = 0, m2 = 0, m3 = 0;
  for (const char* side : {"left", "right", "middle"}) {
    double r;
    allPass(haarSp1, side, &r);
    m1 = std::max(m1, r);
    allPass(haarSp2, side, &r);
    m2 = std::max(m2, r);
    allPass(haarG2, side, &r);
    m3 = std::max(m3, r);
  }
  report(5, ok, "Haar invariance: 5 left, 5 right, 5 middle (K) translations each",
         fmt("worst defect / tolerance: Sp(1) %.3g (quadrature, 1e-6), Sp(2) %.3g, G2 %.3g (3 sigma)", m1, m2, m3));
}

void criterion6() {
  double r1 = 0, r2 = 0;
  const bool ok = allPass(haarSp1, "sampler", &r1) && allPass(haarSp2, "sampler", &r2);
  report(6, ok, "quaternionic sampler reproduces chart moments",
         fmt("worst deviation / 3 sigma: Sp(1) %.3g, Sp(2) %.3g over 5 moments", r1, r2));
}

void criterion7() {
  SuiteConfig cfg;
  cfg.group = "spn";
  cfg.N = 1;
  cfg.Pmax = 3;
  cfg.order = 40;
  cfg.seed = 303;
  cfg.tol = kQuadTol;
  const auto sp = runSuite("transform", cfg).report;
  double spRatio = 0;
  const bool spOk = allPass(sp, "f", &spRatio);
  const double spread = check(sp, "fitted constant relative spread").at("value");
  cfg.group = "g2";
  cfg.Pmax = 2;
  cfg.samples = kSamples;
  const auto g = runSuite("transform", cfg).report;
  double gRatio = 0;
  const bool gOk = allPass(g, "f", &gRatio);
  const bool consistent = check(g, "fitted constants agree within 3 sigma").at("status") == "pass";
  const double ratio = g.at("transform").at("printed_constant_ratio");
  report(7, spOk && spread <= kSpreadTol && gOk && consistent, "transform LHS = RHS",
         fmt("Sp(1) 5 fns P=1..3 worst diff / 1e-6 %.3g, constant spread %.3g (tol 1e-3); ", spRatio, spread) +
             fmt("G2 2 fns P=1,2 worst diff / 3 sigma %.3g, constants ", gRatio) + (consistent ? "consistent" : "inconsistent") +
             fmt(", fitted / typeset G2 constant %.6g", ratio));
}

void criterion8() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  // Within ~1e-6 of a wall the xi-form loses digits to the rounding of xi = sin y itself
  // (it is a difference of nearly equal products); those points are counted, not measured.
  long skipped = 0;
  double spWorst = 0;
  for (int N : {1, 2, 3, 4}) {
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> y(static_cast<std::size_t>(N));
      for (auto& v : y) v = kPi / 2 * U(rng);
      std::sort(y.begin(), y.end());
      std::vector<double> xi;
      double sub = std::pow(2.0, N);
      for (double v : y) {
        xi.push_back(std::sin(v));
        sub *= std::cos(v);
      }
      if (spnContext(N).cartan.regionA.margin(y) < kWallMargin) {
        ++skipped;
        continue;
      }
      const double J = jacobianSpN(N, y);
      spWorst = std::max(spWorst, std::abs(spnXiWeight(N, xi.data()) * sub - J) / std::abs(J));
    }
  }
  double gWorst = 0;
  for (int t = 0; t < 10000; ++t) {
    const double y1 = kPi / 2 * U(rng), y2 = y1 / 3 * U(rng);
    if (regionG2().margin({y1, y2}) < kWallMargin) {
      ++skipped;
      continue;
    }
    const double J = jacobianG2(y1, y2);
    gWorst = std::max(gWorst, std::abs(g2XiWeight(std::sin(y1), std::sin(y2)) * std::cos(y1) * std::cos(y2) * 4 - J) / std::abs(J));
  }
  double cubic = 0;
  for (int i = 0; i <= 1000; ++i) {
    const double xi = i / 1000.0, s = tripleAngleS(xi);
    cubic = std::max(cubic, std::abs(4 * s * s * s - 3 * s + xi));
  }
  report(8, spWorst <= kWeightRelTol && gWorst <= kWeightRelTol && cubic <= kCubicTol, "weight consistency under xi = sin y",
         fmt("Sp(1..4) max rel %.3g, G2 max rel %.3g (tol 1e-10); triple-angle cubic residual %.3g (tol 1e-14)", spWorst, gWorst,
             cubic) +
             "; " + std::to_string(skipped) + " of 14000 points within 1e-4 of a wall skipped");
}

void criterion9() {
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<int> npts(1, 8), dim(1, 4), num(-3, 3), den(1, 4);
  int mismatch = 0, inside = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = npts(rng), d = dim(rng);
    std::vector<ExponentVec> pts(static_cast<std::size_t>(n));
    for (auto& p : pts)
      for (int a = 0; a < d; ++a) p.push_back(Rational(num(rng), den(rng)));
    const bool lp = zeroInHull(pts);
    inside += lp;
    mismatch += lp != zeroInHullBruteForce(pts);
  }
  report(9, mismatch == 0, "exact hull vs Caratheodory brute force",
         std::to_string(mismatch) + " mismatches on 1000 instances (" + std::to_string(inside) + " contain 0)");
}

AdmissibleFunction fromJson(const std::string& s) { return parseAdmissible(s); }

void criterion10() {
  ScanConfig sc;
  sc.budget.order = 24;
  sc.budget.samples = 0;
  struct Case {
    std::string name, text, weight;
    int Pmax;
    std::string want;
  };
  const std::vector<Case> cases{
      {"z1", R"({"N":1,"k":0,"l":1,"terms":[{"exponents":["1/1"],"poly":[{"xpow":[],"spow":[],"coeff":[1,0]}]}]})", "flat", 4,
       "consistent"},
      {"1", R"({"N":1,"k":0,"l":1,"terms":[{"exponents":["0/1"],"poly":[{"xpow":[],"spow":[],"coeff":[1,0]}]}]})", "flat", 4,
       "hypothesis-not-met"},
      {"z1+1/z1",
       R"({"N":1,"k":0,"l":1,"terms":[{"exponents":["1/1"],"poly":[{"xpow":[],"spow":[],"coeff":[1,0]}]},{"exponents":["-1/1"],"poly":[{"xpow":[],"spow":[],"coeff":[1,0]}]}]})",
       "flat", 4, "hypothesis-not-met"},
      {"z1+(2x-1)/z1 P<=3",
       R"({"N":1,"k":1,"l":1,"terms":[{"exponents":["1/1"],"poly":[{"xpow":[0],"spow":[0],"coeff":[1,0]}]},{"exponents":["-1/1"],"poly":[{"xpow":[1],"spow":[0],"coeff":[2,0]},{"xpow":[0],"spow":[0],"coeff":[-1,0]}]}]})",
       "flat", 3, "potential-counterexample"},
      {"z1+(2x-1)/z1 P<=4",
       R"({"N":1,"k":1,"l":1,"terms":[{"exponents":["1/1"],"poly":[{"xpow":[0],"spow":[0],"coeff":[1,0]}]},{"exponents":["-1/1"],"poly":[{"xpow":[1],"spow":[0],"coeff":[2,0]},{"xpow":[0],"spow":[0],"coeff":[-1,0]}]}]})",
       "flat", 4, "hypothesis-not-met"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    ScanConfig s = sc;
    s.weight = c.weight;
    s.Pmax = c.Pmax;
    const auto r = scanConjecture(fromJson(c.text), s);
    const std::string got = r.report.at("status");
    ok = ok && got == c.want;
    detail += c.name + " -> " + got + (got == c.want ? "" : " (want " + c.want + ")") + "; ";
  }
  ScanConfig bc = sc;
  bc.Pmax = 4;
  const auto batch = randomAdmissibleBatch(100, 4, 2, 2, 606);
  const auto a = scanBatch(batch, bc), b = scanBatch(randomAdmissibleBatch(100, 4, 2, 2, 606), bc);
  const bool same = dumpJson(a.report) == dumpJson(b.report);
  const auto& counts = a.report.at("status_counts");
  const int flagged = counts.contains("potential-counterexample") ? counts.at("potential-counterexample").get<int>() : 0;
  const int undecided = counts.contains("inconclusive") ? counts.at("inconclusive").get<int>() : 0;
  ok = ok && same && flagged == 0 && undecided == 0;
  for (const auto& fj : a.report.at("functions"))
    if (fj.contains("depth_probe"))
      detail += "flagged #" + fj.at("index").dump() + " spectrum " + fj.at("spectrum").dump() + ", first nonzero moment at P = " +
                fj.at("depth_probe").at("first_nonzero_P").dump() + "; ";
  detail += "batch of 100 (1/4-admissible, flat weight, P<=4): " + counts.dump() + (same ? ", reproducible" : ", NOT reproducible");
  report(10, ok, "scan statuses", detail);
}

}  // namespace

int main() {
  std::printf("acceptance: %ld Monte Carlo samples where sampling is used\n", kSamples);
  criterion1();
  criterion2();
  criterion3();
  runHaar();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
