#include "ubound/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ubound/errors.hpp"

namespace ubound {

namespace {

HermitianOperator symmetrized(const CMatrix& m) { return hermitian_from_matrix(m); }

double max_abs_entry(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(CMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
  return HermitianOperator(CMatrix::Zero(dim, dim));
}

HermitianOperator hermitian_from_matrix(const CMatrix& entries) {
  if (entries.rows() != entries.cols()) {
    std::ostringstream msg;
    msg << "matrix is " << entries.rows() << "x" << entries.cols();
    throw Error(ErrorCode::NotSquare, msg.str());
  }
  if (entries.rows() == 0) throw Error(ErrorCode::NotSquare, "matrix is empty");
  if (!entries.allFinite()) throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");

  const CMatrix adjoint = entries.adjoint();
  const double asym = (entries - adjoint).cwiseAbs().maxCoeff();
  const double scale = max_abs_entry(entries);
  if (asym > kHermiticityTol * scale) {
    std::ostringstream msg;
    msg << "max |M - M^dagger| = " << asym << " exceeds " << kHermiticityTol << " * " << scale;
    throw Error(ErrorCode::NotHermitian, msg.str());
  }
  return HermitianOperator(CMatrix((entries + adjoint) * 0.5));
}

Povm::Povm(std::vector<double> outcomes, std::vector<HermitianOperator> effects)
    : outcomes_(std::move(outcomes)), effects_(std::move(effects)) {
  if (effects_.empty()) throw Error(ErrorCode::InvalidPovm, "POVM has no effects");
  if (outcomes_.size() != effects_.size()) {
    std::ostringstream msg;
    msg << outcomes_.size() << " outcomes but " << effects_.size() << " effects";
    throw Error(ErrorCode::InvalidPovm, msg.str());
  }
  for (double a : outcomes_) {
    if (!std::isfinite(a)) throw Error(ErrorCode::InvalidPovm, "non-finite outcome");
  }
  const Eigen::Index d = effects_.front().dim();
  CMatrix total = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < effects_.size(); ++i) {
    const auto& e = effects_[i];
    if (e.dim() != d) {
      throw Error(ErrorCode::DimensionMismatch, "effects have different dimensions");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(e.matrix(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTol) {
      std::ostringstream msg;
      msg << "effect " << i << " has eigenvalue " << es.eigenvalues().minCoeff();
      throw Error(ErrorCode::InvalidPovm, msg.str());
    }
    total += e.matrix();
  }
  const double dev = (total - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > kPsdTol) {
    std::ostringstream msg;
    msg << "effects sum to identity only within " << dev;
    throw Error(ErrorCode::InvalidPovm, msg.str());
  }
}

bool Povm::is_projective(double tol) const {
  for (std::size_t i = 0; i < effects_.size(); ++i) {
    const CMatrix& ei = effects_[i].matrix();
    if ((ei * ei - ei).cwiseAbs().maxCoeff() > tol) return false;
    for (std::size_t j = i + 1; j < effects_.size(); ++j) {
      if ((ei * effects_[j].matrix()).cwiseAbs().maxCoeff() > tol) return false;
    }
  }
  return true;
}

double MomentPair::variance(const CVector& psi) const {
  const double first = psi.dot(m1.matrix() * psi).real();
  const double second = psi.dot(m2.matrix() * psi).real();
  return second - first * first;
}

namespace {

Eigen::Index spin_dim(double spin) {
  const double twice = 2.0 * spin;
  if (!std::isfinite(spin) || twice < -1e-12 || std::abs(twice - std::round(twice)) > 1e-12) {
    std::ostringstream msg;
    msg << "spin " << spin << " is not a nonnegative half-integer";
    throw Error(ErrorCode::InvalidSpin, msg.str());
  }
  return static_cast<Eigen::Index>(std::lround(twice)) + 1;
}

// Matrix of L_+ in the basis ordered m = s, s-1, ..., -s.
Eigen::MatrixXd raising(double spin) {
  const Eigen::Index d = spin_dim(spin);
  Eigen::MatrixXd lp = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    const double m = spin - static_cast<double>(i + 1);
    lp(i, i + 1) = std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
  }
  return lp;
}

}  // namespace

HermitianOperator spin_z(double spin) {
  const Eigen::Index d = spin_dim(spin);
  CMatrix lz = CMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) lz(i, i) = spin - static_cast<double>(i);
  return hermitian_from_matrix(lz);
}

HermitianOperator spin_x(double spin) {
  const Eigen::MatrixXd lp = raising(spin);
  const Eigen::MatrixXd lx = 0.5 * (lp + lp.transpose());
  return hermitian_from_matrix(lx.cast<Complex>());
}

HermitianOperator spin_y(double spin) {
  const Eigen::MatrixXd lp = raising(spin);
  const CMatrix ly = (lp - lp.transpose()).cast<Complex>() * Complex(0.0, -0.5);
  return hermitian_from_matrix(ly);
}

HermitianOperator spin_component(double spin, double phi) {
  if (!std::isfinite(phi)) throw Error(ErrorCode::InvalidArgument, "angle must be finite");
  const CMatrix m = std::cos(phi) * spin_z(spin).matrix() + std::sin(phi) * spin_x(spin).matrix();
  return hermitian_from_matrix(m);
}

MomentPair moment_pair_from_observable(const HermitianOperator& a) {
  return MomentPair{a, symmetrized(a.matrix() * a.matrix())};
}

MomentPair moment_pair_from_povm(const Povm& p) {
  const Eigen::Index d = p.dim();
  CMatrix first = CMatrix::Zero(d, d);
  CMatrix second = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < p.effects().size(); ++i) {
    const double a = p.outcomes()[i];
    first += a * p.effects()[i].matrix();
    second += (a * a) * p.effects()[i].matrix();
  }
  // Projective measurements get A^(2) = (A^(1))^2 computed exactly as for an
  // observable input, so both descriptions feed the solver identical bits.
  if (p.is_projective()) return moment_pair_from_observable(symmetrized(first));
  return MomentPair{symmetrized(first), symmetrized(second)};
}

MomentPair depolarize(const MomentPair& mp, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    std::ostringstream msg;
    msg << "noise level " << alpha << " outside [0, 1]";
    throw Error(ErrorCode::AlphaOutOfRange, msg.str());
  }
  const Eigen::Index d = mp.dim();
  const CMatrix id = CMatrix::Identity(d, d);
  auto channel = [&](const CMatrix& m) {
    const double mean = m.trace().real() / static_cast<double>(d);
    return symmetrized((1.0 - alpha) * m + (alpha * mean) * id);
  };
  return MomentPair{channel(mp.m1.matrix()), channel(mp.m2.matrix())};
}

CMatrix kron(const CMatrix& left, const CMatrix& right) {
  const Eigen::Index lr = left.rows(), lc = left.cols();
  const Eigen::Index rr = right.rows(), rc = right.cols();
  CMatrix out(lr * rr, lc * rc);
  for (Eigen::Index i = 0; i < lr; ++i) {
    for (Eigen::Index j = 0; j < lc; ++j) {
      out.block(i * rr, j * rc, rr, rc) = left(i, j) * right;
    }
  }
  return out;
}

MomentPair sum_observable(const MomentPair& alice, const MomentPair& bob) {
  const CMatrix ia = CMatrix::Identity(alice.dim(), alice.dim());
  const CMatrix ib = CMatrix::Identity(bob.dim(), bob.dim());
  const CMatrix first = kron(alice.m1.matrix(), ib) + kron(ia, bob.m1.matrix());
  const CMatrix second = kron(alice.m2.matrix(), ib) +
                         2.0 * kron(alice.m1.matrix(), bob.m1.matrix()) +
                         kron(ia, bob.m2.matrix());
  return MomentPair{symmetrized(first), symmetrized(second)};
}

MomentPair scale(const MomentPair& mp, double mu) {
  if (!std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "scale factor must be finite");
  return MomentPair{symmetrized(mu * mp.m1.matrix()), symmetrized((mu * mu) * mp.m2.matrix())};
}

HermitianOperator build_H(const MomentPair& a, const MomentPair& b, const Vec3& r) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << "measurement dimensions " << a.dim() << " and " << b.dim() << " differ";
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  if (!r.allFinite()) throw Error(ErrorCode::InvalidArgument, "direction must be finite");
  CMatrix h = r(0) * a.m1.matrix();
  h += r(1) * b.m1.matrix();
  h += r(2) * (a.m2.matrix() + b.m2.matrix());
  return symmetrized(h);
}

}  // namespace ubound
