#include "kak/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>

namespace kak {

namespace {

void requireSquare(const CMat& X, const char* what) {
  if (X.rows() != X.cols() || X.rows() == 0)
    throw DimensionError(std::string(what) + ": matrix must be square and nonempty");
}

}  // namespace

CMat expm(const CMat& X) {
  requireSquare(X, "expm");
  if (!allFinite(X)) throw std::domain_error("expm: non-finite entries");
  return X.exp();
}

CMat bracket(const CMat& X, const CMat& Y) {
  requireSquare(X, "bracket");
  if (X.rows() != Y.rows() || Y.rows() != Y.cols())
    throw DimensionError("bracket: dimension mismatch");
  return X * Y - Y * X;
}

double frob(const CMat& X, const CMat& Y) { return (X.conjugate().cwiseProduct(Y)).sum().real(); }

double maxAbs(const CMat& X) { return X.size() == 0 ? 0.0 : X.cwiseAbs().maxCoeff(); }

bool allFinite(const CMat& X) {
  for (Eigen::Index i = 0; i < X.size(); ++i)
    if (!std::isfinite(X.data()[i].real()) || !std::isfinite(X.data()[i].imag())) return false;
  return true;
}

Span::Span(std::vector<CMat> basis) : basis_(std::move(basis)) {
  if (basis_.empty()) throw std::invalid_argument("Span: empty basis");
  dim_ = static_cast<int>(basis_.front().rows());
  const auto n = static_cast<Eigen::Index>(basis_.size());
  RMat G(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b <= a; ++b) G(a, b) = G(b, a) = frob(basis_[a], basis_[b]);
  Eigen::SelfAdjointEigenSolver<RMat> es(G);
  gramMin_ = es.eigenvalues().minCoeff();
  llt_.compute(G);
}

RVec Span::coords(const CMat& X, double* residual) const {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  RVec r(n);
  for (Eigen::Index a = 0; a < n; ++a) r(a) = frob(basis_[a], X);
  RVec c = llt_.solve(r);
  if (residual) {
    CMat rem = X;
    for (Eigen::Index a = 0; a < n; ++a) rem -= c(a) * basis_[a];
    *residual = std::sqrt(std::max(0.0, frob(rem, rem)));
  }
  return c;
}

double Span::residual(const CMat& X) const {
  double r = 0;
  coords(X, &r);
  return r;
}

CMat symplecticForm(int N) {
  CMat J = CMat::Zero(2 * N, 2 * N);
  J.topRightCorner(N, N).setIdentity();
  J.bottomLeftCorner(N, N) = -CMat::Identity(N, N);
  return J;
}

CheckResult check(const MatrixPredicate& pred, const CMat& A) {
  CheckResult out;
  if (A.rows() != A.cols() || A.rows() == 0 || !allFinite(A)) {
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  const auto n = A.rows();
  const CMat I = CMat::Identity(n, n);
  double res = maxAbs(A.adjoint() * A - I);
  switch (pred.kind) {
    case PredicateKind::Unitary:
      break;
    case PredicateKind::SpecialUnitary:
      res = std::max(res, std::abs(A.determinant() - 1.0));
      break;
    case PredicateKind::Symplectic: {
      if (n % 2 != 0) {
        out.residual = std::numeric_limits<double>::infinity();
        return out;
      }
      const CMat J = symplecticForm(static_cast<int>(n / 2));
      res = std::max(res, maxAbs(J * A.conjugate() * J.transpose() - A));
      break;
    }
    case PredicateKind::Orthogonal:
      res = std::max(res, A.imag().cwiseAbs().maxCoeff());
      break;
    case PredicateKind::InGroup: {
      if (pred.requireReal) res = std::max(res, A.imag().cwiseAbs().maxCoeff());
      if (pred.requireUnitDet) res = std::max(res, std::abs(A.determinant() - 1.0));
      if (pred.invariantAlgebra) {
        if (pred.invariantAlgebra->matrixDim() != n) {
          out.residual = std::numeric_limits<double>::infinity();
          return out;
        }
        const CMat Ainv = A.adjoint();
        for (const auto& b : pred.invariantAlgebra->basis())
          res = std::max(res, pred.invariantAlgebra->residual(A * b * Ainv));
      }
      break;
    }
  }
  out.residual = res;
  out.ok = res <= pred.tolerance;
  return out;
}

OneParameterSubgroup::OneParameterSubgroup(const CMat& A) : A_(A) {
  requireSquare(A, "OneParameterSubgroup");
  if (maxAbs(A + A.adjoint()) > 1e-12) throw std::invalid_argument("OneParameterSubgroup: generator not skew-Hermitian");
  // iA is Hermitian; group its eigenvectors by eigenvalue.
  Eigen::SelfAdjointEigenSolver<CMat> es(cplx(0, 1) * A);
  const RVec mu = es.eigenvalues();
  const CMat V = es.eigenvectors();
  const auto n = A.rows();
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && std::abs(mu(j + 1) - mu(i)) < 1e-9) ++j;
    double m = mu.segment(i, j - i + 1).mean();
    CMat P = V.middleCols(i, j - i + 1) * V.middleCols(i, j - i + 1).adjoint();
    // exp(tA) = sum exp(-i t mu) P since A = -i (iA).
    freqs_.push_back(-m);
    projectors_.push_back(P);
    i = j + 1;
  }
  if (maxAbs((*this)(0.7) - expm(0.7 * A)) > 1e-12)
    throw std::runtime_error("OneParameterSubgroup: spectral form disagrees with expm");
}

CMat OneParameterSubgroup::operator()(double t) const {
  CMat out = CMat::Zero(A_.rows(), A_.cols());
  for (std::size_t k = 0; k < freqs_.size(); ++k) out += std::polar(1.0, freqs_[k] * t) * projectors_[k];
  return out;
}

}  // namespace kak
