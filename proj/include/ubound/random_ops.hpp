#ifndef UBOUND_RANDOM_OPS_HPP
#define UBOUND_RANDOM_OPS_HPP

#include <cstdint>
#include <random>

#include "ubound/operators.hpp"

namespace ubound {

enum class SpectrumKind { Gaussian, Uniform };

// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
// R's diagonal moved into Q.
CMatrix haar_unitary(Eigen::Index dim, std::mt19937_64& rng);

// U diag(spectrum) U^dagger with Haar U. Gaussian spectra are standard
// normal, uniform spectra lie in [0, 1].
HermitianOperator random_observable(Eigen::Index dim, SpectrumKind kind, std::mt19937_64& rng);

// Haar-random unit vector.
CVector random_state(Eigen::Index dim, std::mt19937_64& rng);

// Projective POVM of U diag(spectrum) U^dagger: outcome spectrum[k] with
// effect u_k u_k^dagger. `observable` receives the operator assembled from
// the same projectors in the same order.
struct SpectralSample {
  HermitianOperator observable;
  std::vector<double> outcomes;
  std::vector<HermitianOperator> projectors;
};
SpectralSample random_spectral_sample(Eigen::Index dim, SpectrumKind kind, std::mt19937_64& rng);

}  // namespace ubound

#endif  // UBOUND_RANDOM_OPS_HPP
