#include "ubound/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "ubound/errors.hpp"

namespace ubound {

namespace {

std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void insert_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void erase_value(std::vector<int>& v, int x) { v.erase(std::remove(v.begin(), v.end(), x), v.end()); }

double band(double tol, const Vec3& p) { return tol * (1.0 + p.norm()); }

}  // namespace

Polytope3 Polytope3::box(const Vec3& lo, const Vec3& hi) {
  if (!lo.allFinite() || !hi.allFinite() || !(lo.array() < hi.array()).all()) {
    std::ostringstream msg;
    msg << "box [" << lo.transpose() << "] - [" << hi.transpose() << "] has no interior";
    throw Error(ErrorCode::EmptyBox, msg.str());
  }
  Polytope3 p;
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 e = Vec3::Zero();
    e(axis) = 1.0;
    p.halfspaces_.push_back({e, lo(axis)});
    p.halfspaces_.push_back({-e, -hi(axis)});
  }
  // Vertex id = bit pattern (x bit 0, y bit 1, z bit 2), bit set means upper face.
  for (int bits = 0; bits < 8; ++bits) {
    Vec3 pos;
    std::vector<int> planes;
    for (int axis = 0; axis < 3; ++axis) {
      const bool upper = (bits >> axis) & 1;
      pos(axis) = upper ? hi(axis) : lo(axis);
      planes.push_back(2 * axis + (upper ? 1 : 0));
    }
    p.add_vertex(pos, planes);
  }
  for (int bits = 0; bits < 8; ++bits) {
    for (int axis = 0; axis < 3; ++axis) p.verts_[bits].neighbors.push_back(bits ^ (1 << axis));
  }
  return p;
}

int Polytope3::add_vertex(const Vec3& pos, std::vector<int> planes) {
  std::sort(planes.begin(), planes.end());
  planes.erase(std::unique(planes.begin(), planes.end()), planes.end());
  const int id = static_cast<int>(verts_.size());
  verts_.push_back(Vertex{pos, std::move(planes), {}, true});
  mu_index_.insert(key_of(pos, id));
  ++alive_;
  return id;
}

void Polytope3::kill_vertex(int id) {
  Vertex& v = verts_[id];
  mu_index_.erase(key_of(v.pos, id));
  v.alive = false;
  v.neighbors.clear();
  v.neighbors.shrink_to_fit();
  --alive_;
}

bool Polytope3::planes_parallel(int a, int b) const {
  const Vec3 na = halfspaces_[a].normal.normalized();
  const Vec3 nb = halfspaces_[b].normal.normalized();
  return na.cross(nb).norm() <= 1e-10;
}

bool Polytope3::share_edge_planes(int a, int b, int new_plane) const {
  for (int q : sorted_intersection(verts_[a].planes, verts_[b].planes)) {
    if (q != new_plane && !planes_parallel(q, new_plane)) return true;
  }
  return false;
}

CutOutcome Polytope3::cut(const HalfSpace& hs, double tol, std::optional<int> hint) {
  const double nn = hs.normal.norm();
  if (!(nn > 0.0) || !hs.normal.allFinite() || !std::isfinite(hs.offset)) {
    throw Error(ErrorCode::InvalidArgument, "half-space needs a finite nonzero normal");
  }
  auto dist = [&](int id) { return hs.slack(verts_[id].pos) / nn; };
  auto is_out = [&](int id) { return dist(id) < -band(tol, verts_[id].pos); };
  auto is_on = [&](int id) { return std::abs(dist(id)) <= band(tol, verts_[id].pos); };

  std::unordered_set<int> out;
  if (hint && *hint >= 0 && *hint < static_cast<int>(verts_.size()) && verts_[*hint].alive &&
      is_out(*hint)) {
    // Vertices beyond a plane induce a connected subgraph of a convex polytope.
    std::vector<int> stack{*hint};
    out.insert(*hint);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int w : verts_[u].neighbors) {
        if (!out.count(w) && is_out(w)) {
          out.insert(w);
          stack.push_back(w);
        }
      }
    }
  } else {
    for (int id = 0; id < static_cast<int>(verts_.size()); ++id) {
      if (verts_[id].alive && is_out(id)) out.insert(id);
    }
  }
  if (out.size() == alive_) {
    throw Error(ErrorCode::EmptyPolytope, "cut removes every vertex");
  }

  const int plane = static_cast<int>(halfspaces_.size());
  halfspaces_.push_back(hs);
  CutOutcome outcome;

  if (out.empty()) {
    for (int id = 0; id < static_cast<int>(verts_.size()); ++id) {
      if (verts_[id].alive && is_on(id)) insert_sorted(verts_[id].planes, plane);
    }
    return outcome;
  }

  // Deterministic processing order regardless of hash-set iteration.
  std::vector<int> doomed(out.begin(), out.end());
  std::sort(doomed.begin(), doomed.end());

  std::vector<int> face;
  std::unordered_set<int> on_face;
  for (int u : doomed) {
    const std::vector<int> nbrs = verts_[u].neighbors;
    for (int w : nbrs) {
      if (out.count(w)) continue;
      if (is_on(w)) {
        erase_value(verts_[w].neighbors, u);
        if (on_face.insert(w).second) {
          insert_sorted(verts_[w].planes, plane);
          face.push_back(w);
        }
        continue;
      }
      const double su = hs.slack(verts_[u].pos);
      const double sw = hs.slack(verts_[w].pos);
      const Vec3 x = verts_[w].pos + (sw / (sw - su)) * (verts_[u].pos - verts_[w].pos);
      std::vector<int> planes = sorted_intersection(verts_[u].planes, verts_[w].planes);
      planes.push_back(plane);
      const int id = add_vertex(x, std::move(planes));
      verts_[id].neighbors.push_back(w);
      std::replace(verts_[w].neighbors.begin(), verts_[w].neighbors.end(), u, id);
      face.push_back(id);
      outcome.added.push_back(x);
    }
  }
  // Vertices lying in the plane but only reachable along in-plane edges.
  for (std::size_t i = 0; i < face.size(); ++i) {
    if (!on_face.count(face[i])) continue;
    for (int w : verts_[face[i]].neighbors) {
      if (!out.count(w) && !on_face.count(w) && is_on(w)) {
        on_face.insert(w);
        insert_sorted(verts_[w].planes, plane);
        face.push_back(w);
      }
    }
  }

  for (int u : doomed) {
    outcome.removed.push_back(verts_[u].pos);
    kill_vertex(u);
  }

  for (std::size_t i = 0; i < face.size(); ++i) {
    for (std::size_t j = i + 1; j < face.size(); ++j) {
      const int a = face[i], b = face[j];
      auto& na = verts_[a].neighbors;
      if (std::find(na.begin(), na.end(), b) != na.end()) continue;
      if (share_edge_planes(a, b, plane)) {
        na.push_back(b);
        verts_[b].neighbors.push_back(a);
      }
    }
  }
  return outcome;
}

MuMinimum Polytope3::min_mu_vertex() const {
  if (mu_index_.empty()) throw Error(ErrorCode::EmptyPolytope, "polytope has no vertices");
  const auto& [value, x, y, z, id] = *mu_index_.begin();
  return MuMinimum{Vec3(x, y, z), value, id};
}

std::vector<int> Polytope3::vertex_ids() const {
  std::vector<int> ids;
  ids.reserve(alive_);
  for (int id = 0; id < static_cast<int>(verts_.size()); ++id) {
    if (verts_[id].alive) ids.push_back(id);
  }
  return ids;
}

std::vector<Vec3> Polytope3::vertices() const {
  std::vector<Vec3> out;
  out.reserve(alive_);
  for (const auto& v : verts_) {
    if (v.alive) out.push_back(v.pos);
  }
  return out;
}

std::vector<std::pair<int, int>> Polytope3::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int id = 0; id < static_cast<int>(verts_.size()); ++id) {
    if (!verts_[id].alive) continue;
    for (int w : verts_[id].neighbors) {
      if (id < w) out.emplace_back(id, w);
    }
  }
  return out;
}

std::size_t Polytope3::edge_count() const {
  std::size_t degree_sum = 0;
  for (const auto& v : verts_) {
    if (v.alive) degree_sum += v.neighbors.size();
  }
  return degree_sum / 2;
}

namespace {

// Groups half-spaces that describe the same plane; returns a representative
// index per half-space.
std::vector<int> plane_groups(const std::vector<HalfSpace>& hs, double tol) {
  std::vector<int> rep(hs.size());
  std::iota(rep.begin(), rep.end(), 0);
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double ni = hs[i].normal.norm();
    for (std::size_t j = 0; j < i; ++j) {
      if (rep[j] != static_cast<int>(j)) continue;
      const double nj = hs[j].normal.norm();
      const Vec3 ui = hs[i].normal / ni, uj = hs[j].normal / nj;
      const double offset_scale = 1.0 + std::max(std::abs(hs[i].offset / ni), std::abs(hs[j].offset / nj));
      if ((ui - uj).norm() <= 1e-10 && std::abs(hs[i].offset / ni - hs[j].offset / nj) <= tol * offset_scale) {
        rep[i] = static_cast<int>(j);
        break;
      }
    }
  }
  return rep;
}

}  // namespace

std::size_t Polytope3::facet_count(double tol) const {
  const std::vector<int> rep = plane_groups(halfspaces_, tol);
  std::map<int, std::size_t> incidence;
  for (const auto& v : verts_) {
    if (!v.alive) continue;
    std::vector<int> groups;
    for (int q : v.planes) groups.push_back(rep[q]);
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    for (int g : groups) ++incidence[g];
  }
  std::size_t facets = 0;
  for (const auto& [g, count] : incidence) {
    if (count >= 3) ++facets;
  }
  return facets;
}

std::string Polytope3::check_invariants(double tol) const {
  std::ostringstream msg;
  msg << std::setprecision(17);
  for (int id = 0; id < static_cast<int>(verts_.size()); ++id) {
    const Vertex& v = verts_[id];
    if (!v.alive) continue;
    if (!v.pos.allFinite()) {
      msg << "vertex " << id << " is not finite";
      return msg.str();
    }
    const double allowed = 2.0 * band(tol, v.pos);
    for (std::size_t q = 0; q < halfspaces_.size(); ++q) {
      const double d = halfspaces_[q].slack(v.pos) / halfspaces_[q].normal.norm();
      if (d < -allowed) {
        msg << "vertex " << id << " violates half-space " << q << " by " << -d;
        return msg.str();
      }
    }
    Eigen::MatrixXd normals(static_cast<Eigen::Index>(v.planes.size()), 3);
    for (std::size_t k = 0; k < v.planes.size(); ++k) {
      const HalfSpace& h = halfspaces_[v.planes[k]];
      const double d = std::abs(h.slack(v.pos)) / h.normal.norm();
      if (d > allowed) {
        msg << "vertex " << id << " lies " << d << " away from incident plane " << v.planes[k];
        return msg.str();
      }
      normals.row(static_cast<Eigen::Index>(k)) = h.normal.normalized().transpose();
    }
    if (v.planes.size() < 3 || Eigen::FullPivLU<Eigen::MatrixXd>(normals).rank() < 3) {
      msg << "vertex " << id << " is not pinned by three independent planes";
      return msg.str();
    }
    if (v.neighbors.size() < 3) {
      msg << "vertex " << id << " has degree " << v.neighbors.size();
      return msg.str();
    }
    for (int w : v.neighbors) {
      if (w == id || !verts_[w].alive) {
        msg << "vertex " << id << " has an invalid neighbor " << w;
        return msg.str();
      }
      const auto& back = verts_[w].neighbors;
      if (std::find(back.begin(), back.end(), id) == back.end()) {
        msg << "edge " << id << "-" << w << " is not symmetric";
        return msg.str();
      }
    }
  }
  const long euler = static_cast<long>(alive_) - static_cast<long>(edge_count()) +
                     static_cast<long>(facet_count(tol));
  if (euler != 2) {
    msg << "Euler characteristic V - E + F = " << euler;
    return msg.str();
  }
  return {};
}

std::vector<std::vector<int>> Polytope3::faces() const {
  const std::vector<int> rep = plane_groups(halfspaces_, kCutTol);
  std::map<int, std::vector<int>> members;  // group -> dense vertex indices
  std::vector<int> dense(verts_.size(), -1);
  int next = 0;
  for (int id = 0; id < static_cast<int>(verts_.size()); ++id) {
    if (!verts_[id].alive) continue;
    dense[id] = next++;
    std::vector<int> groups;
    for (int q : verts_[id].planes) groups.push_back(rep[q]);
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    for (int g : groups) members[g].push_back(id);
  }
  std::vector<std::vector<int>> out;
  for (auto& [g, ids] : members) {
    if (ids.size() < 3) continue;
    const Vec3 normal = halfspaces_[g].normal.normalized();
    Vec3 centroid = Vec3::Zero();
    for (int id : ids) centroid += verts_[id].pos;
    centroid /= static_cast<double>(ids.size());
    const Vec3 u = (std::abs(normal.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(normal).normalized();
    const Vec3 w = normal.cross(u);
    std::vector<std::pair<double, int>> angular;
    for (int id : ids) {
      const Vec3 d = verts_[id].pos - centroid;
      angular.emplace_back(std::atan2(d.dot(w), d.dot(u)), dense[id]);
    }
    // Outward orientation: inward normal, so wind clockwise about it.
    std::sort(angular.begin(), angular.end(), [](auto& a, auto& b) { return a.first > b.first; });
    std::vector<int> cycle;
    for (auto& [angle, idx] : angular) cycle.push_back(idx);
    out.push_back(std::move(cycle));
  }
  return out;
}

void Polytope3::write_off(std::ostream& out) const {
  const auto fs = faces();
  out << "OFF\n" << alive_ << ' ' << fs.size() << " 0\n";
  out << std::setprecision(17);
  for (const auto& v : verts_) {
    if (v.alive) out << v.pos.x() << ' ' << v.pos.y() << ' ' << v.pos.z() << '\n';
  }
  for (const auto& f : fs) {
    out << f.size();
    for (int idx : f) out << ' ' << idx;
    out << '\n';
  }
}

void Polytope3::compact() {
  std::vector<int> remap(verts_.size(), -1);
  std::vector<Vertex> kept;
  kept.reserve(alive_);
  for (int id = 0; id < static_cast<int>(verts_.size()); ++id) {
    if (!verts_[id].alive) continue;
    remap[id] = static_cast<int>(kept.size());
    kept.push_back(std::move(verts_[id]));
  }
  for (auto& v : kept) {
    for (int& w : v.neighbors) w = remap[w];
  }
  verts_ = std::move(kept);
  mu_index_.clear();
  for (int id = 0; id < static_cast<int>(verts_.size()); ++id) mu_index_.insert(key_of(verts_[id].pos, id));
}

std::pair<Polytope3, CutOutcome> cut(const Polytope3& p, const HalfSpace& hs, double tol) {
  Polytope3 next = p;
  CutOutcome outcome = next.cut(hs, tol);
  return {std::move(next), std::move(outcome)};
}

std::vector<Vec3> enumerate_vertices(const std::vector<HalfSpace>& halfspaces, double tol,
                                     double merge_tol) {
  std::vector<Vec3> found;
  const std::size_t n = halfspaces.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        Eigen::Matrix3d m;
        m.row(0) = halfspaces[i].normal.transpose();
        m.row(1) = halfspaces[j].normal.transpose();
        m.row(2) = halfspaces[k].normal.transpose();
        const double scale =
            halfspaces[i].normal.norm() * halfspaces[j].normal.norm() * halfspaces[k].normal.norm();
        if (std::abs(m.determinant()) <= 1e-12 * scale) continue;
        const Vec3 rhs(halfspaces[i].offset, halfspaces[j].offset, halfspaces[k].offset);
        const Vec3 x = m.fullPivLu().solve(rhs);
        bool feasible = x.allFinite();
        for (std::size_t q = 0; q < n && feasible; ++q) {
          const double d = halfspaces[q].slack(x) / halfspaces[q].normal.norm();
          feasible = d >= -band(tol, x);
        }
        if (!feasible) continue;
        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Vec3& y) {
          return (x - y).norm() <= merge_tol * (1.0 + x.norm());
        });
        if (!duplicate) found.push_back(x);
      }
    }
  }
  return found;
}

}  // namespace ubound
