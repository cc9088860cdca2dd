#ifndef UBOUND_BOUND_SOLVER_HPP
#define UBOUND_BOUND_SOLVER_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "ubound/eigensolver.hpp"
#include "ubound/operators.hpp"
#include "ubound/polytope.hpp"

namespace ubound {

enum class SolveStatus { Converged, MaxStepsReached, StalledAtOptimum };

std::string_view to_string(SolveStatus status);

// A certified supporting half-space r . x >= h of the joint numerical range:
// h never exceeds the smallest eigenvalue of build_H(r).
struct Direction {
  Vec3 r;
  double h = 0.0;
};

struct StepRecord {
  int step = 0;
  std::size_t vertices = 0;
  double c_lower = 0.0;
  double c_upper = 0.0;
  Vec3 r = Vec3::Zero();      // direction added in this step (zero for step 0)
  Vec3 vstar = Vec3::Zero();  // mu-minimizing vertex the direction was taken at
  double mu_vstar = 0.0;
  bool vstar_removed = false;

  double gap() const { return c_upper - c_lower; }
};

struct BoundResult {
  double c_lower = 0.0;
  double c_upper = 0.0;
  double gap = 0.0;
  int steps = 0;
  std::vector<Direction> directions;
  std::vector<StepRecord> trace;
  SolveStatus status = SolveStatus::MaxStepsReached;
  std::optional<Polytope3> polytope;  // final outer approximation, when requested
};

struct SolverOptions {
  double eps_target = 1e-6;
  int max_steps = 5000;
  double eigen_tol = kDefaultEigenTol;
  EigenMethod eigen_method = EigenMethod::Auto;
  double cut_tol = kCutTol;
  bool keep_polytope = false;
};

// Certified sandwich c_lower <= c <= c_upper for
//   c = min over states of var A + var B
// by refining a polytope that contains the set of expectation triples
// (<A^(1)>, <B^(1)>, <A^(2) + B^(2)>). c_lower is a valid state-independent
// bound whatever the returned status.
BoundResult optimal_bound(const MomentPair& a, const MomentPair& b, const SolverOptions& options);
BoundResult optimal_bound(const MomentPair& a, const MomentPair& b, double eps_target = 1e-6,
                          int max_steps = 5000);

// Rebuilds the outer approximation from a certificate's directions (the first
// six must be the cube normals +x, -x, +y, -y, +z, -z) and returns the
// minimum of mu over its vertices, i.e. the lower bound those directions prove.
double replay_lower_bound(const std::vector<Direction>& directions, double cut_tol = kCutTol);

// Bound for alpha var A + beta var B, alpha, beta >= 0.
BoundResult weighted_bound(const MomentPair& a, const MomentPair& b, double alpha, double beta,
                           const SolverOptions& options);

// Alternating minimization over the state and the offsets (a, b). Returns an
// achievable variance sum, i.e. an upper bound on c; nonincreasing in iters.
double seesaw(const MomentPair& a, const MomentPair& b, double a0, double b0, int iters);

// min over an n_grid x n_grid grid of offsets of
//   lambda_min((A - a)^2 + (B - b)^2)  (moment-operator form),
// the offsets spanning the spectral ranges of A^(1) and B^(1).
double oracle_grid(const MomentPair& a, const MomentPair& b, int n_grid);

// Bound on oracle_grid(a, b, n_grid) - c coming from the grid spacing: the
// inner function exceeds c by at most the squared distance to the optimal offsets.
double oracle_grid_error(const MomentPair& a, const MomentPair& b, int n_grid);

}  // namespace ubound

#endif  // UBOUND_BOUND_SOLVER_HPP
