#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace kak {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kPi = 3.14159265358979323846;

// exp(X) by scaling and squaring with Pade approximants (Eigen MatrixFunctions).
CMat expm(const CMat& X);

CMat bracket(const CMat& X, const CMat& Y);

// Real Frobenius inner product Re Tr(X^dagger Y).
double frob(const CMat& X, const CMat& Y);
double maxAbs(const CMat& X);
bool allFinite(const CMat& X);

// Real-linear span of a list of matrices, with least-squares coordinates.
class Span {
 public:
  explicit Span(std::vector<CMat> basis);
  std::size_t size() const { return basis_.size(); }
  int matrixDim() const { return dim_; }
  const std::vector<CMat>& basis() const { return basis_; }
  // Coordinates c minimizing |X - sum c_i b_i|; residual is the Frobenius norm of the remainder.
  RVec coords(const CMat& X, double* residual = nullptr) const;
  double residual(const CMat& X) const;
  // Smallest singular value of the Gram matrix.
  double gramMinEig() const { return gramMin_; }

 private:
  std::vector<CMat> basis_;
  int dim_ = 0;
  Eigen::LLT<RMat> llt_;
  double gramMin_ = 0;
};

enum class PredicateKind { Unitary, SpecialUnitary, Symplectic, Orthogonal, InGroup };

struct MatrixPredicate {
  PredicateKind kind = PredicateKind::Unitary;
  double tolerance = 1e-12;
  // InGroup: orthogonal/unitary base check plus Ad-invariance of this subalgebra.
  std::shared_ptr<const Span> invariantAlgebra;
  bool requireReal = false;
  bool requireUnitDet = false;
};

struct CheckResult {
  bool ok = false;
  double residual = 0;
};

CheckResult check(const MatrixPredicate& pred, const CMat& A);

// J = [[0, 1_N], [-1_N, 0]].
CMat symplecticForm(int N);

// exp(t A) for a fixed skew-Hermitian A through its spectral projectors.
class OneParameterSubgroup {
 public:
  explicit OneParameterSubgroup(const CMat& A);
  CMat operator()(double t) const;
  const CMat& generator() const { return A_; }

 private:
  CMat A_;
  std::vector<double> freqs_;
  std::vector<CMat> projectors_;
};

}  // namespace kak
