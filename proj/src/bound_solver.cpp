#include "ubound/bound_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ubound/errors.hpp"

namespace ubound {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxStepsReached: return "MaxStepsReached";
    case SolveStatus::StalledAtOptimum: return "StalledAtOptimum";
  }
  return "Unknown";
}

namespace {

// Widths below this fraction of the overall scale are treated as flat (the
// measurement set lies in a plane or line) and padded so that the box keeps
// an interior. Padding only enlarges the outer approximation.
constexpr double kFlatFraction = 1e-6;
constexpr int kCompactEvery = 512;

struct Probe {
  Direction dir;
  ExpectationTriple touch;
};

Probe probe(const MomentPair& a, const MomentPair& b, const Vec3& r, const SolverOptions& opt) {
  const EigenResult eig = lowest_eigenpair(build_H(a, b, r), opt.eigen_tol, opt.eigen_method);
  return Probe{Direction{r, eig.value - eig.slack()}, expectation_triple(a, b, eig.vector)};
}

// Box spanned by the six cube-normal directions, padded along flat axes.
Polytope3 initial_box(const std::vector<Direction>& dirs) {
  Vec3 lo, hi;
  for (int axis = 0; axis < 3; ++axis) {
    lo(axis) = dirs[2 * axis].h;
    hi(axis) = -dirs[2 * axis + 1].h;
  }
  const double scale = 1.0 + std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff());
  for (int axis = 0; axis < 3; ++axis) {
    if (hi(axis) - lo(axis) < kFlatFraction * scale) {
      lo(axis) -= kFlatFraction * scale;
      hi(axis) += kFlatFraction * scale;
    }
  }
  return Polytope3::box(lo, hi);
}

void check_pair(const MomentPair& a, const MomentPair& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << "measurement dimensions " << a.dim() << " and " << b.dim() << " differ";
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

}  // namespace

BoundResult optimal_bound(const MomentPair& a, const MomentPair& b, const SolverOptions& opt) {
  check_pair(a, b);
  if (!(opt.eps_target > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps_target must be positive");
  if (opt.max_steps < 1) throw Error(ErrorCode::InvalidArgument, "max_steps must be at least 1");

  BoundResult res;
  res.c_upper = std::numeric_limits<double>::infinity();

  // Cube normals give the bounding box of the expectation triples.
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {1.0, -1.0}) {
      Vec3 r = Vec3::Zero();
      r(axis) = sign;
      const Probe p = probe(a, b, r, opt);
      res.directions.push_back(p.dir);
      res.c_upper = std::min(res.c_upper, p.touch.mu());
    }
  }

  Polytope3 poly = initial_box(res.directions);
  MuMinimum vmin = poly.min_mu_vertex();
  res.c_lower = vmin.value;
  res.trace.push_back(StepRecord{0, poly.vertex_count(), res.c_lower, res.c_upper, Vec3::Zero(),
                                 vmin.vertex, vmin.value, false});

  res.status = SolveStatus::MaxStepsReached;
  for (int step = 1; step <= opt.max_steps; ++step) {
    if (res.c_upper - res.c_lower <= opt.eps_target) {
      res.status = SolveStatus::Converged;
      break;
    }
    // Gradient of mu at the minimizing vertex: the tangent plane of the
    // level set through v*, which separates v* from everything achievable
    // unless v* itself is achievable.
    const Vec3 r(-2.0 * vmin.vertex.x(), -2.0 * vmin.vertex.y(), 1.0);
    const Probe p = probe(a, b, r, opt);
    res.directions.push_back(p.dir);
    res.c_upper = std::min(res.c_upper, p.touch.mu());

    try {
      poly.cut(HalfSpace{r, p.dir.h}, opt.cut_tol, vmin.id);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyPolytope) throw;
      throw Error(ErrorCode::NumericalFailure,
                  "outer approximation became empty at step " + std::to_string(step));
    }
    const bool removed = !poly.alive(vmin.id);
    const Vec3 vstar = vmin.vertex;
    const double mu_vstar = vmin.value;

    res.steps = step;
    if (step % kCompactEvery == 0) poly.compact();
    vmin = poly.min_mu_vertex();
    res.c_lower = std::max(res.c_lower, vmin.value);
    res.trace.push_back(StepRecord{step, poly.vertex_count(), res.c_lower, res.c_upper, r, vstar,
                                   mu_vstar, removed});
    if (!removed) {
      // The supporting plane touches v*, so v* is (numerically) achievable.
      res.status = res.c_upper - res.c_lower <= opt.eps_target ? SolveStatus::Converged
                                                               : SolveStatus::StalledAtOptimum;
      break;
    }
  }
  if (res.status == SolveStatus::MaxStepsReached && res.c_upper - res.c_lower <= opt.eps_target) {
    res.status = SolveStatus::Converged;
  }
  res.gap = res.c_upper - res.c_lower;
  if (opt.keep_polytope) res.polytope = std::move(poly);
  return res;
}

double replay_lower_bound(const std::vector<Direction>& directions, double cut_tol) {
  if (directions.size() < 6) throw Error(ErrorCode::InvalidArgument, "certificate needs the six cube normals");
  for (int k = 0; k < 6; ++k) {
    Vec3 expected = Vec3::Zero();
    expected(k / 2) = (k % 2 == 0) ? 1.0 : -1.0;
    if (directions[k].r != expected) {
      throw Error(ErrorCode::InvalidArgument, "certificate does not start with the cube normals");
    }
  }
  Polytope3 poly = initial_box(directions);
  double lower = poly.min_mu_vertex().value;
  for (std::size_t k = 6; k < directions.size(); ++k) {
    poly.cut(HalfSpace{directions[k].r, directions[k].h}, cut_tol, poly.min_mu_vertex().id);
    if (k % kCompactEvery == 0) poly.compact();
    lower = std::max(lower, poly.min_mu_vertex().value);
  }
  return lower;
}

BoundResult optimal_bound(const MomentPair& a, const MomentPair& b, double eps_target, int max_steps) {
  SolverOptions opt;
  opt.eps_target = eps_target;
  opt.max_steps = max_steps;
  return optimal_bound(a, b, opt);
}

BoundResult weighted_bound(const MomentPair& a, const MomentPair& b, double alpha, double beta,
                           const SolverOptions& options) {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "weights must be finite and nonnegative");
  }
  return optimal_bound(scale(a, std::sqrt(alpha)), scale(b, std::sqrt(beta)), options);
}

double seesaw(const MomentPair& a, const MomentPair& b, double a0, double b0, int iters) {
  check_pair(a, b);
  if (iters < 1) throw Error(ErrorCode::InvalidArgument, "seesaw needs at least one iteration");
  double off_a = a0, off_b = b0;
  double value = std::numeric_limits<double>::infinity();
  for (int it = 0; it < iters; ++it) {
    // <(A - a)^2 + (B - b)^2> = <H(-2a, -2b, 1)> + a^2 + b^2
    const EigenResult eig = lowest_eigenpair(build_H(a, b, Vec3(-2.0 * off_a, -2.0 * off_b, 1.0)));
    const ExpectationTriple t = expectation_triple(a, b, eig.vector);
    value = std::min(value, t.mu());
    off_a = t.x;
    off_b = t.y;
  }
  return value;
}

namespace {

std::pair<double, double> spectral_range(const HermitianOperator& op) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(op.matrix(), Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(es.eigenvalues().size() - 1)};
}

double grid_point(double lo, double hi, int i, int n) {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

double oracle_grid(const MomentPair& a, const MomentPair& b, int n_grid) {
  check_pair(a, b);
  if (n_grid < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points per axis");
  const auto [alo, ahi] = spectral_range(a.m1);
  const auto [blo, bhi] = spectral_range(b.m1);
  const CMatrix second = a.m2.matrix() + b.m2.matrix();
  double best = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.dim());
  for (int i = 0; i < n_grid; ++i) {
    const double off_a = grid_point(alo, ahi, i, n_grid);
    const CMatrix row = second - (2.0 * off_a) * a.m1.matrix();
    for (int j = 0; j < n_grid; ++j) {
      const double off_b = grid_point(blo, bhi, j, n_grid);
      es.compute(row - (2.0 * off_b) * b.m1.matrix(), Eigen::EigenvaluesOnly);
      best = std::min(best, es.eigenvalues()(0) + off_a * off_a + off_b * off_b);
    }
  }
  return best;
}

double oracle_grid_error(const MomentPair& a, const MomentPair& b, int n_grid) {
  check_pair(a, b);
  if (n_grid < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points per axis");
  const auto [alo, ahi] = spectral_range(a.m1);
  const auto [blo, bhi] = spectral_range(b.m1);
  const double half_a = 0.5 * (ahi - alo) / (n_grid - 1);
  const double half_b = 0.5 * (bhi - blo) / (n_grid - 1);
  return half_a * half_a + half_b * half_b;
}

}  // namespace ubound
