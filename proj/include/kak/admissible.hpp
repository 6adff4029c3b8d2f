#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kak/core.hpp"
#include "kak/integrate.hpp"

namespace kak {

struct AdmissibilityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct PowerOverflowError : std::length_error {
  using std::length_error::length_error;
};
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, long line, long column)
      : std::runtime_error(what), line(line), column(column) {}
  long line = 0, column = 0;
};

using ExponentVec = std::vector<Rational>;

// x^xpow * s^spow with s_i = sqrt(1 - kappa_i x_i^2), spow in {0, 1}.
struct Monomial {
  std::vector<int> xpow, spow;
  bool operator<(const Monomial& o) const { return std::tie(xpow, spow) < std::tie(o.xpow, o.spow); }
  bool operator==(const Monomial& o) const { return xpow == o.xpow && spow == o.spow; }
};

using CoefficientPoly = std::map<Monomial, cplx>;

struct AdmissibleFunction {
  int N = 1;  // admissibility bound: exponent denominators in 1..N
  int k = 0;  // cube variables
  int l = 0;  // circle variables
  std::map<ExponentVec, CoefficientPoly> terms;
  // kappa_i of s_i = sqrt(1 - kappa_i x_i^2); empty means all 1.
  std::vector<double> sqrtScale;

  double kappa(int i) const { return sqrtScale.empty() ? 1.0 : sqrtScale[static_cast<std::size_t>(i)]; }
  std::vector<ExponentVec> spectrum() const;
  std::size_t termCount() const;
};

// Canonical form: s^2 rewritten, tiny coefficients dropped, empty polys removed, denominators audited.
AdmissibleFunction canonicalize(const AdmissibleFunction& f);
// Largest reduced denominator among the exponents (1 for an empty spectrum).
long long maxDenominator(const AdmissibleFunction& f);
// True when every exponent denominator is <= bound.
bool denominatorAudit(const AdmissibleFunction& f, int bound);

cplx evaluate(const AdmissibleFunction& f, const std::vector<double>& x, const std::vector<double>& theta);
cplx evaluatePoly(const CoefficientPoly& c, const double* x, const std::vector<double>& kappa);

AdmissibleFunction multiply(const AdmissibleFunction& a, const AdmissibleFunction& b, std::size_t guard = 1000000);
AdmissibleFunction powerExpand(const AdmissibleFunction& f, int P, std::size_t guard = 1000000);

// 0 in Conv(points), decided by exact rational phase-I simplex.
bool zeroInHull(const std::vector<ExponentVec>& points);

// Weight as a product of factors over disjoint groups of cube variables.
struct WeightFactor {
  std::vector<int> vars;
  std::function<double(const double* xg)> w;
  // Optional map [0,1]^|vars| -> group region, returning its Jacobian (nested ordered domains).
  std::function<double(const double* u, double* xg)> map;
  int order = 0;  // per-axis Gauss-Legendre order; 0 = use the budget order
};

struct WeightSpec {
  std::string name;
  int k = 0;
  std::vector<WeightFactor> factors;
  double operator()(const double* x) const;
  CubeTorusDomain domain(int l) const;
};

struct MomentBudget {
  int order = 24;      // quadrature order for the factorized cube integrals (0 disables quadrature)
  long samples = 0;    // Monte Carlo fallback budget
  std::uint64_t seed = 1;
  int threads = 1;
  std::size_t guard = 1000000;
};

struct MomentEntry {
  int P = 0;
  cplx value = 0;
  double error = 0;
  double scale = 0;  // integral of sum |c| |z| w: reference magnitude for the zero test
  std::string method;
  bool zero = false;
  bool decided = true;
};

enum class ScanStatus { Consistent, HypothesisNotMet, PotentialCounterexample, Inconclusive };
std::string toString(ScanStatus s);

struct ScanReport {
  std::vector<MomentEntry> moments;
  bool hullContainsZero = false;
  ScanStatus status = ScanStatus::Inconclusive;
  MomentBudget budget;
};

// Weighted integrals of f^P for P = 1..Pmax: analytic torus factors times factorized
// Gauss-Legendre cube integrals, Monte Carlo when the expansion overflows the guard.
std::vector<MomentEntry> weightedMoments(const AdmissibleFunction& f, const WeightSpec& weight, int Pmax,
                                         const MomentBudget& budget);

ScanReport momentScan(const AdmissibleFunction& f, const WeightSpec& weight, int Pmax, const MomentBudget& budget);

// Integral over [0, 2pi) of exp(i m theta).
cplx torusIntegral(const Rational& m);

// File format (JSON): {N, k, l, terms: [{exponents: ["p/q", ...], poly: [{xpow, spow, coeff: [re, im]}]}], sqrt_scale?}
AdmissibleFunction parseAdmissible(const std::string& text);
std::string serializeAdmissible(const AdmissibleFunction& f);
std::string fracToString(const Rational& r);
Rational parseFrac(const std::string& s);

}  // namespace kak
