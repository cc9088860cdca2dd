#include "ubound/eigensolver.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>

#include "ubound/errors.hpp"

namespace ubound {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double residual_of(const CMatrix& h, double value, const CVector& v) {
  return (h * v - value * v).norm();
}

EigenResult dense_lowest(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "dense Hermitian eigensolver failed");
  }
  EigenResult out;
  out.value = es.eigenvalues()(0);
  out.vector = es.eigenvectors().col(0);
  out.vector.normalize();
  out.norm = std::max(std::abs(es.eigenvalues()(0)),
                      std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
  out.residual = residual_of(h, out.value, out.vector);
  return out;
}

CVector deterministic_start(Eigen::Index n) {
  std::mt19937_64 gen(0x9e3779b97f4a7c15ULL);
  auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5; };
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(unit(), unit());
  return v.normalized();
}

// Restarted Lanczos with full reorthogonalization; each cycle restarts from
// the current lowest Ritz vector.
EigenResult lanczos_lowest(const CMatrix& h, double tol) {
  const Eigen::Index n = h.rows();
  const Eigen::Index m = std::min<Eigen::Index>(n, 80);
  const double norm = h.cwiseAbs().colwise().sum().maxCoeff();
  constexpr int kMaxRestarts = 300;

  CVector start = deterministic_start(n);
  CMatrix basis(n, m);
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
    basis.col(0) = start;
    Eigen::Index used = m;
    for (Eigen::Index j = 0; j < m; ++j) {
      CVector w = h * basis.col(j);
      alpha(j) = basis.col(j).dot(w).real();
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        const CVector coeffs = basis.leftCols(j + 1).adjoint() * w;
        w -= basis.leftCols(j + 1) * coeffs;
      }
      if (j + 1 == m) break;
      beta(j) = w.norm();
      if (beta(j) <= 1e3 * kEps * std::max(norm, 1.0)) {
        used = j + 1;
        break;
      }
      basis.col(j + 1) = w / beta(j);
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(used, used);
    for (Eigen::Index j = 0; j < used; ++j) {
      tri(j, j) = alpha(j);
      if (j + 1 < used) tri(j, j + 1) = tri(j + 1, j) = beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const Eigen::VectorXd s = es.eigenvectors().col(0);
    CVector ritz = basis.leftCols(used) * s.cast<Complex>();
    ritz.normalize();
    const double theta = ritz.dot(h * ritz).real();
    const double res = residual_of(h, theta, ritz);
    if (res <= tol * std::max(norm, kEps)) {
      return EigenResult{theta, ritz, res, norm};
    }
    start = ritz;
  }
  std::ostringstream msg;
  msg << "Lanczos did not reach relative residual " << tol << " for dimension " << n;
  throw Error(ErrorCode::ConvergenceFailure, msg.str());
}

}  // namespace

double EigenResult::slack() const {
  return residual + 4.0 * static_cast<double>(vector.size()) * kEps * norm;
}

EigenResult lowest_eigenpair(const HermitianOperator& h, double tol, EigenMethod method) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "eigensolver tolerance must be positive");
  const CMatrix& m = h.matrix();
  switch (method) {
    case EigenMethod::Dense:
      return dense_lowest(m);
    case EigenMethod::Lanczos:
      return lanczos_lowest(m, tol);
    case EigenMethod::Auto:
      break;
  }
  if (m.rows() <= kDenseDimLimit) return dense_lowest(m);
  try {
    return lanczos_lowest(m, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ConvergenceFailure) throw;
    return dense_lowest(m);
  }
}

double lowest_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

ExpectationTriple expectation_triple(const MomentPair& a, const MomentPair& b, const CVector& psi) {
  if (a.dim() != b.dim() || psi.size() != a.dim()) {
    std::ostringstream msg;
    msg << "state of length " << psi.size() << " against measurements of dimension " << a.dim()
        << " and " << b.dim();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "state has norm " << psi.norm();
    throw Error(ErrorCode::NotNormalized, msg.str());
  }
  auto expect = [&psi](const CMatrix& op) {
    const Complex v = psi.dot(op * psi);
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, op.cwiseAbs().maxCoeff())) {
      throw Error(ErrorCode::NumericalFailure, "expectation of a Hermitian operator is not real");
    }
    return v.real();
  };
  return ExpectationTriple{expect(a.m1.matrix()), expect(b.m1.matrix()),
                           expect(a.m2.matrix()) + expect(b.m2.matrix())};
}

}  // namespace ubound
