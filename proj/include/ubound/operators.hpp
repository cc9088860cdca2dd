#ifndef UBOUND_OPERATORS_HPP
#define UBOUND_OPERATORS_HPP

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace ubound {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

// A finite-dimensional observable. The only way to obtain one is through
// hermitian_from_matrix (or the generators below), so every instance has
// passed the hermiticity check and holds an exactly Hermitian matrix.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  const CMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  static HermitianOperator identity(Eigen::Index dim);
  static HermitianOperator zero(Eigen::Index dim);

  friend HermitianOperator hermitian_from_matrix(const CMatrix& entries);

 private:
  explicit HermitianOperator(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

// Validates hermiticity relative to the largest entry and returns the
// symmetrized matrix (M + M^dagger) / 2.
HermitianOperator hermitian_from_matrix(const CMatrix& entries);

// Outcomes a_i with effects E_i; validated on construction (PSD effects that
// sum to the identity).
class Povm {
 public:
  Povm(std::vector<double> outcomes, std::vector<HermitianOperator> effects);

  const std::vector<double>& outcomes() const noexcept { return outcomes_; }
  const std::vector<HermitianOperator>& effects() const noexcept { return effects_; }
  Eigen::Index dim() const noexcept { return effects_.front().dim(); }

  // True when the effects are mutually orthogonal projectors.
  bool is_projective(double tol = kPsdTol) const;

 private:
  std::vector<double> outcomes_;
  std::vector<HermitianOperator> effects_;
};

// First and second moment operators of a single measurement. For projective
// measurements m2 is exactly m1 * m1.
struct MomentPair {
  HermitianOperator m1;
  HermitianOperator m2;

  Eigen::Index dim() const noexcept { return m1.dim(); }

  // <psi|m2|psi> - <psi|m1|psi>^2 for a unit vector psi.
  double variance(const CVector& psi) const;
};

HermitianOperator spin_component(double spin, double phi);

// L_x, L_y, L_z in the standard basis |s, s>, |s, s-1>, ..., |s, -s>.
HermitianOperator spin_x(double spin);
HermitianOperator spin_y(double spin);
HermitianOperator spin_z(double spin);

MomentPair moment_pair_from_observable(const HermitianOperator& a);
MomentPair moment_pair_from_povm(const Povm& p);

// Heisenberg-picture action of rho -> (1 - alpha) rho + alpha * 1/d.
MomentPair depolarize(const MomentPair& mp, double alpha);

// Outcomes added: Alice's measurement on the left Kronecker factor, Bob's on the right.
MomentPair sum_observable(const MomentPair& alice, const MomentPair& bob);

// Outcomes multiplied by mu.
MomentPair scale(const MomentPair& mp, double mu);

// r1 * A^(1) + r2 * B^(1) + r3 * (A^(2) + B^(2)).
HermitianOperator build_H(const MomentPair& a, const MomentPair& b, const Vec3& r);

// Kronecker product with the left factor outermost.
CMatrix kron(const CMatrix& left, const CMatrix& right);

}  // namespace ubound

#endif  // UBOUND_OPERATORS_HPP
