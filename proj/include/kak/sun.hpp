#pragma once

#include "kak/core.hpp"

namespace kak {

// lambda_index of u(N), index in 0 .. N^2-1.
CMat suLambda(int N, int index);
std::vector<CMat> suBasis(int N);  // lambda_1 .. lambda_{N^2-1}
std::vector<CMat> uBasis(int N);   // lambda_0 .. lambda_{N^2-1}

std::shared_ptr<const GroupSpec> suGroup(int N);
std::shared_ptr<const GroupSpec> uGroup(int N);

// Parameter layout shared by the SU(N) and U(N) charts.
struct SuNLayout {
  int N = 0;
  int pairs = 0;  // N(N-1)/2: number of phi's and of psi's
  int phi(int i) const { return i; }               // 0-based
  int psi(int i) const { return pairs + i; }
  int omega(int j) const { return 2 * pairs + j - 1; }  // j = 1 .. N-1
  int xi() const { return 2 * pairs + N - 1; }
  int suSize() const { return 2 * pairs + N - 1; }
};

EulerChart buildSuN(int N);
EulerChart buildUN(int N);
EulerChart buildUNmodZ2N(int N);

// SU(N) part of the Haar density at the SU(N)-parameters of p (first suSize() entries).
// Closed form for N <= 2; the numeric density oracle otherwise.
double suDensity(int N, const Params& p);

// Whether phi_i sits first in its recursion block (range [0, pi]).
bool phiIsBlockHead(int N, int i);

}  // namespace kak
