#pragma once

#include <array>

#include "kak/core.hpp"

namespace kak {

struct RootSpaceEntry {
  std::string label;
  RootFunctional root;               // on (lambda_5, lambda_11); [H, v] = i root(H) v
  std::array<cplx, 14> coeffs;       // v = sum coeffs[a] lambda_{a+1}
};

struct G2Context {
  std::vector<CMat> lambdas;  // lambda_1 .. lambda_14 (0-based storage)
  CMat sigma, eta;
  CMat thetaMatrix;           // diag(1_3, -1_4)
  std::shared_ptr<const GroupSpec> group;
  std::shared_ptr<const GroupSpec> kGroup;
  CartanData cartan;
  std::vector<int> adBasis;   // 0-based indices of lambda_1..4, 6..10, 12..14
  RMat printedAd5, printedAd11;
  std::vector<RootSpaceEntry> printedRootSpaces;
  std::vector<RootSpaceEntry> correctedRootSpaces;

  const CMat& lambda(int oneBased) const { return lambdas.at(static_cast<std::size_t>(oneBased - 1)); }
  CMat combine(const std::array<cplx, 14>& c) const;
};

const G2Context& g2Context();

// Matrix of ad(X) on the 12-element basis; column j holds the coordinates of [X, b_j].
RMat adMatrix(const G2Context& ctx, const CMat& X);

struct RootExtraction {
  std::vector<RootFunctional> roots;  // sorted
  double roundingResidual = 0;
};
RootExtraction extractRoots(const G2Context& ctx);

// max |[H, v] - i root(H) v| over H in {lambda_5, lambda_11}
double rootSpaceResidual(const G2Context& ctx, const RootSpaceEntry& e);

std::vector<RootFunctional> positiveRootsG2();
RegionSpec regionG2();
double jacobianG2(double y1, double y2);

// F_K: exp(phi1 l3) exp(psi1 l2) exp(omega1 l3) exp(phi2 l8) exp(psi2 l9) exp(omega2 l8).
EulerChart buildKChart();
EulerChart buildKmodMChart();
// 14 parameters: K/M block, y1, y2, K block.
EulerChart buildG2Chart();

// Product formula of F_K at the given six angles (no domain checks).
CMat g2KProduct(const double* p);

}  // namespace kak
