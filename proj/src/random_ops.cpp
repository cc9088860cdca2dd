#include "ubound/random_ops.hpp"

#include <cmath>

namespace ubound {

namespace {

CMatrix ginibre(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return g;
}

std::vector<double> spectrum(Eigen::Index dim, SpectrumKind kind, std::mt19937_64& rng) {
  std::vector<double> out(static_cast<std::size_t>(dim));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (double& x : out) x = kind == SpectrumKind::Gaussian ? normal(rng) : uniform(rng);
  return out;
}

}  // namespace

CMatrix haar_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  const CMatrix g = ginibre(dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

SpectralSample random_spectral_sample(Eigen::Index dim, SpectrumKind kind, std::mt19937_64& rng) {
  const CMatrix u = haar_unitary(dim, rng);
  SpectralSample s;
  s.outcomes = spectrum(dim, kind, rng);
  CMatrix total = CMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const CMatrix proj = u.col(k) * u.col(k).adjoint();
    s.projectors.push_back(hermitian_from_matrix(proj));
  }
  for (Eigen::Index k = 0; k < dim; ++k) {
    total += s.outcomes[static_cast<std::size_t>(k)] * s.projectors[static_cast<std::size_t>(k)].matrix();
  }
  s.observable = hermitian_from_matrix(total);
  return s;
}

HermitianOperator random_observable(Eigen::Index dim, SpectrumKind kind, std::mt19937_64& rng) {
  return random_spectral_sample(dim, kind, rng).observable;
}

CVector random_state(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v.normalized();
}

}  // namespace ubound
