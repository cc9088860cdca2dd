#ifndef UBOUND_EIGENSOLVER_HPP
#define UBOUND_EIGENSOLVER_HPP

#include "ubound/operators.hpp"

namespace ubound {

inline constexpr double kDefaultEigenTol = 1e-11;
inline constexpr Eigen::Index kDenseDimLimit = 512;

enum class EigenMethod { Auto, Dense, Lanczos };

struct EigenResult {
  double value = 0.0;  // smallest eigenvalue
  CVector vector;      // unit eigenvector
  double residual = 0.0;  // ||H v - value v||
  double norm = 0.0;      // upper estimate of ||H||_2

  // Amount subtracted from `value` so that value - slack() is a rigorous lower
  // bound on the spectrum despite floating-point error in the solve.
  double slack() const;
};

// Smallest eigenvalue and eigenvector. Auto uses the dense solver up to
// kDenseDimLimit and restarted Lanczos above, falling back to dense when the
// iteration does not converge. Lanczos throws ConvergenceFailure when used
// explicitly and it fails.
EigenResult lowest_eigenpair(const HermitianOperator& h, double tol = kDefaultEigenTol,
                             EigenMethod method = EigenMethod::Auto);

// Smallest eigenvalue only (dense).
double lowest_eigenvalue(const CMatrix& h);

struct ExpectationTriple {
  double x = 0.0;  // <A^(1)>
  double y = 0.0;  // <B^(1)>
  double z = 0.0;  // <A^(2) + B^(2)>

  Vec3 point() const { return {x, y, z}; }
  // Variance sum z - x^2 - y^2.
  double mu() const { return z - x * x - y * y; }
};

ExpectationTriple expectation_triple(const MomentPair& a, const MomentPair& b, const CVector& psi);

}  // namespace ubound

#endif  // UBOUND_EIGENSOLVER_HPP
