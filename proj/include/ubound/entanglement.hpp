#ifndef UBOUND_ENTANGLEMENT_HPP
#define UBOUND_ENTANGLEMENT_HPP

#include <utility>
#include <vector>

#include "ubound/bound_solver.hpp"

namespace ubound {

// Local measurements of a bipartite experiment: Alice measures a1 or a2,
// Bob measures b1 or b2, and M_i adds the outcomes of a_i and b_i.
struct LocalSetting {
  MomentPair a1, a2;
  MomentPair b1, b2;
};

struct SeparableBound {
  BoundResult alice;  // weighted pair (a1, a2)
  BoundResult bob;    // weighted pair (b1, b2)

  double value() const { return alice.c_lower + bob.c_lower; }
  double gap() const { return alice.gap + bob.gap; }
};

// alpha var M1 + beta var M2 >= c_A + c_B for every separable state.
SeparableBound separable_bound(const LocalSetting& s, double alpha, double beta,
                               const SolverOptions& options = {});

// Optimal bound for the sum observables themselves, valid for all states.
BoundResult global_bound(const LocalSetting& s, double alpha, double beta,
                         const SolverOptions& options = {});

// Pair of sum observables (M1, M2).
std::pair<MomentPair, MomentPair> sum_pair(const LocalSetting& s);

// Depolarizes Alice's measurements with alpha_a and Bob's with alpha_b.
LocalSetting depolarize(const LocalSetting& s, double alpha_a, double alpha_b);

struct WitnessReport {
  double c_sep = 0.0;
  double c_global = 0.0;
  std::pair<double, double> weights{1.0, 1.0};
  std::pair<double, double> alpha_noise{0.0, 0.0};
  double gap_a = 0.0;
  double gap_b = 0.0;
  double gap_m = 0.0;

  // Detection window: states with c_global <= var sum < c_sep are entangled.
  bool window_open() const { return c_global < c_sep; }
};

struct WitnessResult {
  WitnessReport report;
  SeparableBound separable;
  BoundResult global;
};

WitnessResult witness(const LocalSetting& s, double alpha_a, double alpha_b,
                      std::pair<double, double> weights = {1.0, 1.0}, const SolverOptions& options = {});

struct NoisePoint {
  double alpha = 0.0;
  double c_sep = 0.0;
  double c_global = 0.0;
};

// Equal weights, the same noise level on both sides. Points are returned in
// input order.
std::vector<NoisePoint> noise_sweep(const LocalSetting& s, const std::vector<double>& alphas,
                                    const SolverOptions& options = {});

struct RegionSample {
  double theta = 0.0;
  double c = 0.0;    // bound for cos(theta) u + sin(theta) v
  double gap = 0.0;
};

// Lower boundary of the set of variance pairs (u, v) = (var M1, var M2)
// implied by half-planes u cos(theta) + v sin(theta) >= c(theta) in the
// nonnegative quadrant, ordered by increasing u from the v axis to the u axis.
struct UncertaintyRegion {
  std::vector<RegionSample> samples;
  std::vector<std::pair<double, double>> hull;

  // Smallest v on the boundary at abscissa u (0 beyond the last hull point).
  double lower_boundary(double u) const;
};

// Angles must lie strictly inside (0, pi/2).
UncertaintyRegion region_trace(const MomentPair& m1, const MomentPair& m2, const std::vector<double>& thetas,
                               const SolverOptions& options = {});

// Region from precomputed samples; used for separable regions (sum of local
// bounds per angle) as well.
UncertaintyRegion region_from_samples(std::vector<RegionSample> samples);

// n angles uniformly spaced strictly inside (0, pi/2).
std::vector<double> uniform_thetas(int n);

}  // namespace ubound

#endif  // UBOUND_ENTANGLEMENT_HPP
