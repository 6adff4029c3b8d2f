#pragma once

#include "kak/core.hpp"

namespace kak {

// [e_j]_{k,l} = delta_{k,j} delta_{l,N+j} - delta_{l,j} delta_{k,N+j}, j = 1..N.
CMat spE(int N, int j);

// sp(N): diag(X, conj X) for X in u(N) (the lambda's), then [[0,B],[-conj B,0]] for symmetric B.
std::vector<CMat> spBasis(int N);
std::shared_ptr<const GroupSpec> spGroup(int N);

double jacobianSpN(int N, const std::vector<double>& y);
RegionSpec regionSpN(int N);
std::vector<CMat> mGroupSpN(int N);
std::vector<RootFunctional> positiveRootsSpN(int N);

// exp(sum y_j e_j) as planar rotations.
CMat spTorus(int N, const std::vector<double>& y);
// diag(U, conj U)
CMat spEmbedK(const CMat& U);

struct SpNContext {
  int N = 0;
  CMat J;
  std::vector<CMat> aBasis;
  std::shared_ptr<const GroupSpec> group;
  CartanData cartan;
  std::shared_ptr<const EulerChart> kChart, kModMChart;
};

const SpNContext& spnContext(int N);

// Parameters: tilde U(N)/Z2^N block (N^2) || y (N) || plain U(N) block (N^2).
EulerChart buildSpNChart(int N);

struct SpNLayout {
  int N = 0;
  int uSize() const { return N * N; }
  int tilde(int i) const { return i; }
  int y(int j) const { return N * N + j; }  // 0-based j
  int plain(int i) const { return N * N + N + i; }
  int size() const { return 2 * N * N + N; }
};

}  // namespace kak
