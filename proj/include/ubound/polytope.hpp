#ifndef UBOUND_POLYTOPE_HPP
#define UBOUND_POLYTOPE_HPP

#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ubound/operators.hpp"

namespace ubound {

inline constexpr double kCutTol = 1e-9;

// Feasible side {x : normal . x >= offset}.
struct HalfSpace {
  Vec3 normal;
  double offset = 0.0;

  double slack(const Vec3& x) const { return normal.dot(x) - offset; }
};

// mu(x) = z - x^2 - y^2; concave, so its minimum over a polytope sits at a vertex.
inline double mu(const Vec3& v) { return v.z() - v.x() * v.x() - v.y() * v.y(); }

struct CutOutcome {
  std::vector<Vec3> removed;
  std::vector<Vec3> added;
};

struct MuMinimum {
  Vec3 vertex;
  double value = 0.0;
  int id = -1;
};

// A bounded convex polytope in R^3, stored both as its list of half-spaces and
// as an explicit vertex/edge graph with per-vertex plane incidence. Vertex ids
// are stable until compact() runs; dead slots are skipped everywhere.
class Polytope3 {
 public:
  // Axis-aligned box [lo, hi]; throws EmptyBox unless lo < hi componentwise.
  static Polytope3 box(const Vec3& lo, const Vec3& hi);

  // Intersects with `hs` in place. Vertices further than tol * (1 + |v|) on
  // the infeasible side are removed, vertices within that band are kept and
  // become incident to the new plane. `hint` names a vertex expected to be
  // cut (the search for violated vertices starts there); without a hint, or
  // when the hint is not violated, every vertex is scanned.
  CutOutcome cut(const HalfSpace& hs, double tol = kCutTol, std::optional<int> hint = std::nullopt);

  MuMinimum min_mu_vertex() const;

  std::vector<Vec3> vertices() const;
  std::vector<std::pair<int, int>> edges() const;  // over ids
  std::size_t vertex_count() const noexcept { return alive_; }
  std::size_t edge_count() const;
  const std::vector<HalfSpace>& halfspaces() const noexcept { return halfspaces_; }

  bool alive(int id) const { return verts_[id].alive; }
  const Vec3& position(int id) const { return verts_[id].pos; }
  const std::vector<int>& incident_planes(int id) const { return verts_[id].planes; }
  std::vector<int> vertex_ids() const;

  // Number of geometrically distinct half-spaces touching at least three
  // vertices (the facets).
  std::size_t facet_count(double tol = 1e-9) const;

  // Empty when every structural invariant holds, otherwise a description of
  // the first violation found.
  std::string check_invariants(double tol = 1e-9) const;

  // Faces as vertex-index cycles over vertices() order, for mesh export.
  std::vector<std::vector<int>> faces() const;
  void write_off(std::ostream& out) const;

  // Drops dead slots; invalidates ids.
  void compact();

 private:
  struct Vertex {
    Vec3 pos;
    std::vector<int> planes;     // sorted half-space indices
    std::vector<int> neighbors;  // vertex ids
    bool alive = true;
  };
  using MuKey = std::tuple<double, double, double, double, int>;

  int add_vertex(const Vec3& pos, std::vector<int> planes);
  void kill_vertex(int id);
  static MuKey key_of(const Vec3& p, int id) { return {mu(p), p.x(), p.y(), p.z(), id}; }
  bool planes_parallel(int a, int b) const;
  bool share_edge_planes(int a, int b, int skip_parallel_to) const;

  std::vector<HalfSpace> halfspaces_;
  std::vector<Vertex> verts_;
  std::set<MuKey> mu_index_;
  std::size_t alive_ = 0;
};

// Free-function form of Polytope3::cut returning a new value.
std::pair<Polytope3, CutOutcome> cut(const Polytope3& p, const HalfSpace& hs, double tol = kCutTol);

// Brute-force vertex enumeration: every triple of planes with a nonsingular
// intersection point feasible for all half-spaces, deduplicated within
// `merge_tol`. Cubic in the number of half-spaces and shares no code with
// the incremental cut.
std::vector<Vec3> enumerate_vertices(const std::vector<HalfSpace>& halfspaces, double tol = 1e-9,
                                     double merge_tol = 1e-8);

}  // namespace ubound

#endif  // UBOUND_POLYTOPE_HPP
