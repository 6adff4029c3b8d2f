#pragma once

#include <array>
#include <random>

#include "kak/admissible.hpp"

namespace kak {

struct MalformedInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Monomial data of an SU(N)/U(N) block: e^{i k phi}, sin^a(psi) cos^b(psi), e^{i l omega}, e^{i x xi}.
struct SuFactorData {
  std::vector<int> phi;                 // N(N-1)/2
  std::vector<std::array<int, 2>> psi;  // N(N-1)/2 pairs (a, b)
  std::vector<int> omega;               // N-1
  int xi = 0;
};

struct SpNTerm {
  cplx c = 1;
  SuFactorData tilde, plain;
  std::vector<std::array<int, 2>> y;  // (p, q): sin^p(y_j) cos^q(y_j), q in {0, 1}
};

struct FiniteTypeSpN {
  int N = 1;
  std::vector<SpNTerm> terms;
};

// k: exponents of (phi~1, omega~1, phi~2, omega~2, phi1, omega1, phi2, omega2)
// l, m: sin/cos exponents of (psi~1, unused, psi~2, y1, y2, psi1, psi2)
struct G2Term {
  cplx c = 1;
  std::array<int, 8> k{};
  std::array<int, 7> l{}, m{};
};

struct FiniteTypeG2 {
  std::vector<G2Term> terms;
};

void validate(const FiniteTypeSpN& f);
void validate(const FiniteTypeG2& f);

// f at chart parameters (same order as buildSpNChart / buildG2Chart).
cplx evaluateSpN(const FiniteTypeSpN& f, const Params& p);
cplx evaluateG2(const FiniteTypeG2& f, const Params& p);

struct Lowered {
  AdmissibleFunction fn;
  WeightSpec weight;
  std::vector<std::string> notes;
};

// Exponent denominators reached by the lowered Sp(N) function: max(2, 2(N-1)).
int spnDenominatorBound(int N);

// Cube: tilde psi's, plain psi's, xi_1..xi_N. Torus: tilde phi's, omega's, xi~, plain phi's, omega's, xi.
Lowered lowerSpN(const FiniteTypeSpN& f);
// Cube: (psi~1 scaled by sqrt 2, psi~2, psi1, psi2, xi1, xi2). Torus: the 8 angles in k order.
Lowered lowerG2(const FiniteTypeG2& f);

// printedForm selects the typeset variants (unsquared xi_k; (3 xi2 - 4 xi2^2)^2) for diagnostics.
WeightSpec weightSpN(int N, bool printedForm = false);
WeightSpec weightG2(bool printedForm = false);

// xi-part of the weights alone.
double spnXiWeight(int N, const double* xi, bool printedForm = false);
double g2XiWeight(double xi1, double xi2, bool printedForm = false);
// J_SU(N) in x = sin(psi) coordinates: the SU(N) density over prod cos(psi).
double suCubeDensity(int N, const double* x);

// sin(asin(xi) / 3): the root of 4 s^3 - 3 s + xi = 0 in [0, 1/2].
double tripleAngleS(double xi);
// The typeset radical with cube-root branch k in {0, 1, 2} (complex arithmetic, real part).
cplx tripleAngleRadical(double xi, int branch);
struct BranchReport {
  std::array<double, 3> maxDeviation{};
  int matchingBranch = -1;
};
BranchReport radicalBranchDiagnostic(int gridPoints = 1000);

// torusFree zeroes every circle exponent, so the moments do not vanish by Fourier orthogonality.
FiniteTypeSpN randomSpN(int N, std::mt19937_64& rng, int terms = 3, bool torusFree = false);
FiniteTypeG2 randomG2(std::mt19937_64& rng, int terms = 2, bool torusFree = false);

struct TransformRow {
  int fn = 0;
  int P = 0;
  cplx lhs = 0;        // normalized group integral
  double lhsError = 0;
  cplx rhsRaw = 0;     // weighted cube-torus integral
  double rhsError = 0;
  cplx rhs = 0;        // rhsRaw / rhs mass
  double diff = 0;
  double constant = 0; // |lhs / rhsRaw| when the moment is clearly nonzero, else NaN
  double constantError = 0;
};

struct TransformReport {
  std::vector<TransformRow> rows;
  double rhsMass = 0;
  double maxDiff = 0;
  double constantSpread = 0;  // relative spread of the fitted constants
  double constantMean = 0;
  bool constantsConsistent = true;  // MC: pairwise within 3 sigma
  // fitted constant over the one predicted by the typeset constant (NaN where that is undefined)
  double printedConstantRatio = 0;
  std::string lhsMethod, rhsMethod;
  std::vector<std::string> notes;
};

struct TransformBudget {
  int lhsOrder = 40;        // tensor Gauss-Legendre on the chart (used when the chart has <= 4 parameters)
  int rhsOrder = 24;        // factorized cube integrals
  long samples = 1000000;   // Monte Carlo on the chart otherwise
  std::uint64_t seed = 1;
  int threads = 1;
};

// LHS: group integral over the chart, normalized; RHS: lowered cube-torus integral, divided by its mass.
TransformReport verifyTransformSpN(int N, const std::vector<FiniteTypeSpN>& fs, int Pmax, const TransformBudget& b);
TransformReport verifyTransformG2(const std::vector<FiniteTypeG2>& fs, int Pmax, const TransformBudget& b);

// JSON input: {"group": "spn", "N": .., "terms": [...]} or {"group": "g2", "terms": [...]}.
FiniteTypeSpN parseFiniteTypeSpN(const std::string& text);
FiniteTypeG2 parseFiniteTypeG2(const std::string& text);

}  // namespace kak
