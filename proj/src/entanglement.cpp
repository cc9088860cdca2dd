#include "ubound/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "ubound/errors.hpp"

namespace ubound {

namespace {

void check_sides(const LocalSetting& s) {
  if (s.a1.dim() != s.a2.dim()) throw Error(ErrorCode::DimensionMismatch, "Alice's measurements differ in dimension");
  if (s.b1.dim() != s.b2.dim()) throw Error(ErrorCode::DimensionMismatch, "Bob's measurements differ in dimension");
}

}  // namespace

SeparableBound separable_bound(const LocalSetting& s, double alpha, double beta, const SolverOptions& options) {
  check_sides(s);
  SeparableBound out;
  out.alice = weighted_bound(s.a1, s.a2, alpha, beta, options);
  out.bob = weighted_bound(s.b1, s.b2, alpha, beta, options);
  return out;
}

std::pair<MomentPair, MomentPair> sum_pair(const LocalSetting& s) {
  check_sides(s);
  return {sum_observable(s.a1, s.b1), sum_observable(s.a2, s.b2)};
}

BoundResult global_bound(const LocalSetting& s, double alpha, double beta, const SolverOptions& options) {
  const auto [m1, m2] = sum_pair(s);
  return weighted_bound(m1, m2, alpha, beta, options);
}

LocalSetting depolarize(const LocalSetting& s, double alpha_a, double alpha_b) {
  return LocalSetting{depolarize(s.a1, alpha_a), depolarize(s.a2, alpha_a), depolarize(s.b1, alpha_b),
                      depolarize(s.b2, alpha_b)};
}

WitnessResult witness(const LocalSetting& s, double alpha_a, double alpha_b, std::pair<double, double> weights,
                      const SolverOptions& options) {
  const LocalSetting noisy = depolarize(s, alpha_a, alpha_b);
  WitnessResult out;
  out.separable = separable_bound(noisy, weights.first, weights.second, options);
  out.global = global_bound(noisy, weights.first, weights.second, options);
  out.report = WitnessReport{out.separable.value(), out.global.c_lower, weights, {alpha_a, alpha_b},
                             out.separable.alice.gap, out.separable.bob.gap, out.global.gap};
  return out;
}

std::vector<NoisePoint> noise_sweep(const LocalSetting& s, const std::vector<double>& alphas,
                                    const SolverOptions& options) {
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "noise level outside [0, 1]");
  }
  return detail::parallel_map(alphas.size(), [&](std::size_t i) {
    const WitnessResult w = witness(s, alphas[i], alphas[i], {1.0, 1.0}, options);
    return NoisePoint{alphas[i], w.report.c_sep, w.report.c_global};
  });
}

std::vector<double> uniform_thetas(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one angle");
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back((k + 1) * (std::numbers::pi / 2) / (n + 1));
  return out;
}

double UncertaintyRegion::lower_boundary(double u) const {
  if (hull.empty()) return 0.0;
  if (u <= hull.front().first) return hull.front().second;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    const auto [u0, v0] = hull[i - 1];
    const auto [u1, v1] = hull[i];
    if (u <= u1) {
      const double t = (u1 > u0) ? (u - u0) / (u1 - u0) : 1.0;
      return v0 + t * (v1 - v0);
    }
  }
  return std::max(0.0, hull.back().second);
}

UncertaintyRegion region_from_samples(std::vector<RegionSample> samples) {
  using Point = std::pair<double, double>;
  double far = 1.0;
  for (const auto& s : samples) {
    far = std::max(far, 2.0 * std::abs(s.c) / std::min(std::cos(s.theta), std::sin(s.theta)) + 1.0);
  }
  std::vector<Point> poly{{0.0, 0.0}, {far, 0.0}, {far, far}, {0.0, far}};
  for (const auto& s : samples) {
    const double ct = std::cos(s.theta), st = std::sin(s.theta);
    auto side = [&](const Point& p) { return ct * p.first + st * p.second - s.c; };
    std::vector<Point> clipped;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point& p = poly[i];
      const Point& q = poly[(i + 1) % poly.size()];
      const double sp = side(p), sq = side(q);
      if (sp >= 0) clipped.push_back(p);
      if ((sp >= 0) != (sq >= 0)) {
        const double t = sp / (sp - sq);
        clipped.emplace_back(p.first + t * (q.first - p.first), p.second + t * (q.second - p.second));
      }
    }
    poly = std::move(clipped);
  }
  std::vector<Point> chain;
  const double edge = far * (1.0 - 1e-12);
  for (const auto& p : poly) {
    if (p.first < edge && p.second < edge) chain.push_back(p);
  }
  std::sort(chain.begin(), chain.end(), [](const Point& a, const Point& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  chain.erase(std::unique(chain.begin(), chain.end(),
                          [](const Point& a, const Point& b) {
                            return std::abs(a.first - b.first) <= 1e-14 && std::abs(a.second - b.second) <= 1e-14;
                          }),
              chain.end());
  UncertaintyRegion region;
  region.samples = std::move(samples);
  region.hull = std::move(chain);
  return region;
}

UncertaintyRegion region_trace(const MomentPair& m1, const MomentPair& m2, const std::vector<double>& thetas,
                               const SolverOptions& options) {
  for (double t : thetas) {
    if (!(t > 0.0 && t < std::numbers::pi / 2)) {
      std::ostringstream msg;
      msg << "angle " << t << " outside (0, pi/2)";
      throw Error(ErrorCode::ThetaOutOfRange, msg.str());
    }
  }
  std::vector<RegionSample> samples = detail::parallel_map(thetas.size(), [&](std::size_t i) {
    const BoundResult r = weighted_bound(m1, m2, std::cos(thetas[i]), std::sin(thetas[i]), options);
    return RegionSample{thetas[i], r.c_lower, r.gap};
  });
  return region_from_samples(std::move(samples));
}

}  // namespace ubound
