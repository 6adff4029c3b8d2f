#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kak/core.hpp"

namespace kak {

enum class QuadratureMethod { GaussLegendreTensor, UniformCircle, MonteCarlo };

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::GaussLegendreTensor;
  int order = 40;                // points per axis
  std::vector<int> axisOrders;   // optional per-axis override
  long samples = 0;
  std::uint64_t seed = 1;
  int threads = 1;
  bool useExactSampler = true;   // MC: use the chart's exact sampler when it has one

  int orderFor(std::size_t axis) const;
  std::string key() const;
};

struct IntegralResult {
  cplx value = 0;          // normalized for chart integrals, raw for cube-torus integrals
  double errorEstimate = 0; // MC: one standard error; quadrature: last-refinement delta
  long budget = 0;
  std::optional<std::uint64_t> seed;
  cplx raw = 0;            // integral of f * weight over the parameter domain (NaN if unknown)
  double mass = 0;         // integral of the weight alone (NaN if unknown)
  double massError = 0;
};

struct PoisonedIntegrandError : std::runtime_error {
  PoisonedIntegrandError(const std::string& what, std::vector<double> point)
      : std::runtime_error(what), point(std::move(point)) {}
  std::vector<double> point;
};

// Gauss-Legendre nodes and weights on [0, 1].
struct GLRule {
  std::vector<double> x, w;
};
const GLRule& gaussLegendre(int n);

// Weighted multi-output integration engines. A kernel writes K complex values and returns a weight.
using CubeKernel = std::function<double(const double* u, cplx* out)>;
using SampleKernel = std::function<double(std::mt19937_64& rng, cplx* out)>;

struct MultiResult {
  std::vector<cplx> weighted;   // sum w f / sum w (normalized means) or sum w f (quadrature)
  std::vector<double> sigma;    // standard errors of the normalized means
  double weightSum = 0;         // quadrature: integral of w; MC: mean of w
  double weightSigma = 0;
  long count = 0;
};

// Tensor rule over [0,1]^d: returns integrals of w f_k and of w.
MultiResult tensorIntegrate(const std::vector<int>& orders, std::size_t K, const CubeKernel& kernel);
// Self-normalized Monte Carlo: sample-weight pairs; blocks of fixed size seeded by (seed, block).
MultiResult monteCarlo(long samples, std::uint64_t seed, int threads, std::size_t K, const SampleKernel& kernel);

// Deterministic per-block generator.
std::mt19937_64 blockRng(std::uint64_t seed, std::uint64_t block);
inline constexpr long kBlockSize = 4096;

using ParamFunctional = std::function<cplx(const Params&)>;

IntegralResult integrateChart(const EulerChart& chart, const GroupFunctional& f, const QuadratureSpec& spec);
IntegralResult integrateChartParams(const EulerChart& chart, const ParamFunctional& f, const QuadratureSpec& spec);

// Several group functionals over one pass of samples or nodes.
std::vector<IntegralResult> integrateChartMulti(const EulerChart& chart, const std::vector<GroupFunctional>& fs,
                                                const QuadratureSpec& spec);

// Normalization constant (integral of the chart weight) per chart and spec, computed once.
std::pair<double, double> chartNormalization(const EulerChart& chart, const QuadratureSpec& spec);

struct CubeTorusDomain {
  int cubeDim = 0;
  int torusDim = 0;
  // Optional nested map from [0,1]^cubeDim onto the cube region; returns its Jacobian.
  std::function<double(const double* u, double* x)> cubeMap;
};

using CubeTorusFunction = std::function<cplx(const double* x, const double* theta)>;
using CubeWeight = std::function<double(const double* x)>;

// Integral over the cube region and [0, 2pi)^torusDim of f * weight d(x) d(theta).
IntegralResult integrateCubeTorus(const CubeTorusFunction& f, const CubeWeight& weight, const CubeTorusDomain& dom,
                                  const QuadratureSpec& spec);

// Haar-distributed Sp(N), N in {1, 2}, via Gram-Schmidt of a Gaussian quaternionic matrix.
CMat haarSampleSpOne(int N, std::mt19937_64& rng);
std::vector<CMat> haarSampleSp(int N, long count, std::uint64_t seed);

// Neumaier-compensated accumulator.
struct KahanSum {
  double s = 0, c = 0;
  void add(double v);
  double value() const { return s + c; }
};

}  // namespace kak
