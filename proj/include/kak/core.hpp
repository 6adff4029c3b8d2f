#pragma once

#include <boost/rational.hpp>

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "kak/linalg.hpp"

namespace kak {

using Rational = boost::rational<long long>;

// boost 1.74's mixed rational/int equality recurses forever under C++20 rewritten comparisons.
inline bool operator==(const Rational& a, int b) { return a == Rational(b); }
inline bool operator!=(const Rational& a, int b) { return !(a == Rational(b)); }
inline bool operator==(int a, const Rational& b) { return Rational(a) == b; }
inline bool operator!=(int a, const Rational& b) { return !(Rational(a) == b); }

double toDouble(const Rational& r);

struct GroupSpec {
  std::string name;
  int matrixDim = 0;
  std::vector<CMat> algebraBasis;
  // <X, Y> = innerProductScale * Tr(XY)
  double innerProductScale = -1.0;
  MatrixPredicate membership;

  double bracketClosureResidual() const;
  double gramMinEig() const;
};

struct RootFunctional {
  std::vector<Rational> coords;
  double operator()(const std::vector<double>& y) const;
  bool operator==(const RootFunctional& o) const { return coords == o.coords; }
  bool operator<(const RootFunctional& o) const { return coords < o.coords; }
  RootFunctional operator-() const;
};

// a . y <= piMultiple * pi
struct LinearConstraint {
  std::vector<Rational> a;
  Rational piMultiple;
};

struct RegionSpec {
  int dim = 0;
  std::vector<LinearConstraint> constraints;

  bool contains(const std::vector<double>& y, double tol = 1e-12) const;
  // Smallest distance from y to a constraint hyperplane (negative when outside).
  double margin(const std::vector<double>& y) const;
  // Axis-aligned bounding box [lo, hi] per coordinate, from the constraints.
  std::vector<std::pair<double, double>> boundingBox() const;
};

struct RegionError : std::domain_error {
  using std::domain_error::domain_error;
};
struct BoundaryError : std::domain_error {
  using std::domain_error::domain_error;
};
struct MembershipError : std::domain_error {
  using std::domain_error::domain_error;
};

// theta(X) = T X T^{-1}
struct Involution {
  CMat T;
  CMat apply(const CMat& X) const;
};

struct CartanData {
  Involution theta;
  std::vector<int> kBasis, pBasis;
  std::vector<CMat> aBasis;
  std::vector<RootFunctional> positiveRoots;
  RegionSpec regionA;
  std::vector<CMat> mGroup;
};

struct CartanReport {
  double thetaResidual = 0;
  double aCommutatorResidual = 0;
  double mCentralizerResidual = 0;
  double mMembershipResidual = 0;
  bool mClosed = false;
};

CartanReport validateCartan(const GroupSpec& g, const CartanData& cd);

struct ChartParam {
  std::string name;
  double lo = 0, hi = 0;
};

struct ChartFactors {
  CMat left, middle, right;
};

using Params = std::vector<double>;

struct EulerChart {
  std::string name;
  std::vector<ChartParam> params;
  std::function<CMat(const Params&)> evaluate;
  // Density factor of this chart, up to a global constant.
  std::function<double(const Params&)> jacobianWeight;
  std::shared_ptr<const GroupSpec> group;

  // Optional: parameters constrained jointly by a region (the y-block of a KAK chart).
  std::shared_ptr<const RegionSpec> region;
  std::vector<int> regionParams;

  // Optional: g = left * middle * right (K/M part, A part, K part).
  std::function<ChartFactors(const Params&)> factors;
  // Optional: exact sampler of the normalized weight on the domain.
  std::function<void(std::mt19937_64&, Params&)> sampler;
  // Optional: map from the unit cube onto the domain, returning the Jacobian of the map.
  std::function<double(const Params& u, Params& p)> cubeMap;

  std::size_t size() const { return params.size(); }
  double boxVolume() const;
  bool inDomain(const Params& p, double tol = 1e-12) const;
  // Distance to the nearest domain boundary (boxes and region).
  double boundaryDistance(const Params& p) const;
  Params mapFromCube(const Params& u, double* jac) const;
};

double genericJacobian(const CartanData& cd, const std::vector<double>& y);

struct DensityOptions {
  double h = 1e-6;
  double boundaryGuard = 1e-4;
};

// Pullback Haar density |det| of g^{-1} dF in an orthonormal algebra basis (-Tr(XY)).
double numericDensityOracle(const EulerChart& chart, const Params& p, const DensityOptions& opt = {});

enum class Side { Left, Right, Middle };

struct Translation {
  CMat h;
  Side side = Side::Left;
};

struct QuadratureSpec;  // integrate.hpp

using GroupFunctional = std::function<cplx(const CMat&)>;

struct DefectResult {
  double defect = 0;
  double sigma = 0;  // standard error of the defect (0 for quadrature)
  double quadratureDelta = 0;
  cplx base = 0;
  cplx translated = 0;
};

DefectResult haarInvarianceDefect(const EulerChart& chart, const CMat& h, const GroupFunctional& f, Side side,
                                  const QuadratureSpec& spec);
// One pass over the samples for many translations; common random numbers across entries.
std::vector<DefectResult> haarInvarianceDefects(const EulerChart& chart, const std::vector<Translation>& hs,
                                                const GroupFunctional& f, const QuadratureSpec& spec);

struct InjectivityReport {
  double minSeparation = 0;
  long trials = 0;
  std::vector<double> worstH, worstHp;
};

InjectivityReport expInjectivityProbe(const CartanData& cd, long trials, std::uint64_t seed = 1);

struct SplitResult {
  std::vector<int> kBasis, pBasis;
};
SplitResult splitByInvolution(const GroupSpec& g, const Involution& theta);

}  // namespace kak
