// Copyright 2026 The subcurve Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>

#include "subcurve/dual.hpp"
#include "subcurve/subdivision.hpp"

namespace subcurve {

/** Four control points of a curve segment; the segment runs from
 *  points[1] to points[2]. */
struct CurveStencil {
  std::array<Vec3, 4> points;
};

inline Vec3 eval_curve_segment(const CurveStencil& s, double u) {
  const double u2 = u * u, u3 = u2 * u;
  const double a = 1.0 - u;
  return ((a * a * a) * s.points[0] + (3 * u3 - 6 * u2 + 4) * s.points[1] +
          (-3 * u3 + 3 * u2 + 3 * u + 1) * s.points[2] + u3 * s.points[3]) /
         6.0;
}

/**
 * Quartic box-spline basis of a regular triangle. Control points are
 * numbered 1..12 on the triangular lattice; the triangle has corners 8, 4
 * and 7 with weights w = 1 - u - v, u and v.
 */
template <class T>
std::array<T, 12> box_spline_basis(const T& u, const T& v) {
  const T w = T(1.0) - u - v;
  const T u2 = u * u, u3 = u2 * u, u4 = u3 * u;
  const T v2 = v * v, v3 = v2 * v, v4 = v3 * v;
  const T w2 = w * w, w3 = w2 * w, w4 = w3 * w;
  std::array<T, 12> n = {
      u4 + 2.0 * u3 * v,
      u4 + 2.0 * u3 * w,
      u4 + 2.0 * u3 * w + 6.0 * u3 * v + 6.0 * u2 * v * w + 12.0 * u2 * v2 +
          6.0 * u * v2 * w + 6.0 * u * v3 + 2.0 * v3 * w + v4,
      6.0 * u4 + 24.0 * u3 * w + 24.0 * u2 * w2 + 8.0 * u * w3 + w4 +
          24.0 * u3 * v + 60.0 * u2 * v * w + 36.0 * u * v * w2 +
          6.0 * v * w3 + 24.0 * u2 * v2 + 36.0 * u * v2 * w +
          12.0 * v2 * w2 + 8.0 * u * v3 + 6.0 * v3 * w + v4,
      u4 + 6.0 * u3 * w + 12.0 * u2 * w2 + 6.0 * u * w3 + w4 +
          2.0 * u3 * v + 6.0 * u2 * v * w + 6.0 * u * v * w2 + 2.0 * v * w3,
      2.0 * u * v3 + v4,
      u4 + 6.0 * u3 * w + 12.0 * u2 * w2 + 6.0 * u * w3 + w4 +
          8.0 * u3 * v + 36.0 * u2 * v * w + 36.0 * u * v * w2 +
          8.0 * v * w3 + 24.0 * u2 * v2 + 60.0 * u * v2 * w +
          24.0 * v2 * w2 + 24.0 * u * v3 + 24.0 * v3 * w + 6.0 * v4,
      u4 + 8.0 * u3 * w + 24.0 * u2 * w2 + 24.0 * u * w3 + 6.0 * w4 +
          6.0 * u3 * v + 36.0 * u2 * v * w + 60.0 * u * v * w2 +
          24.0 * v * w3 + 12.0 * u2 * v2 + 36.0 * u * v2 * w +
          24.0 * v2 * w2 + 6.0 * u * v3 + 8.0 * v3 * w + v4,
      2.0 * u * w3 + w4,
      2.0 * v3 * w + v4,
      2.0 * u * w3 + w4 + 6.0 * u * v * w2 + 6.0 * v * w3 +
          6.0 * u * v2 * w + 12.0 * v2 * w2 + 2.0 * u * v3 + 6.0 * v3 * w +
          v4,
      w4 + 2.0 * v * w3};
  for (auto& x : n) x = x / 12.0;
  return n;
}

/** Result of a limit evaluation. Derivatives are with respect to the
 *  second and third barycentric coordinates and only set on the regular
 *  path. */
struct LimitSample {
  Vec3 point = Vec3::Zero();
  Vec3 d1 = Vec3::Zero();
  Vec3 d2 = Vec3::Zero();
  bool has_derivatives = false;
  int subdivisions = 0;
  bool fallback = false;
};

/**
 * Control points of a triangle (c, r0, r1) with its one-ring, where c has
 * valence k and the ring r0..r(k-1) runs counterclockwise around c. After
 * the ring follow a, b, d, e, f: around r0 counterclockwise the
 * neighbours are r1, c, r(k-1), a, b, d; around r1 they are c, r0, d, e,
 * f, r2. Size k + 6; k = 6 is the regular case.
 */
struct SurfacePatchStencil {
  int valence = 6;
  std::vector<Vec3> points;
};

namespace detail {

using CreaseMap = std::unordered_map<std::uint64_t, FeatureId>;

/** Sub-mesh made of the given triangles; the first one becomes triangle 0. */
inline CreaseMesh gather_patch(const std::vector<Vec3>& x,
                               const std::vector<VertexRole>& role,
                               const std::vector<Tri>& tris,
                               const CreaseMap& crease,
                               const std::vector<int>& sel) {
  CreaseMesh p;
  std::vector<std::pair<int, int>> remap;
  remap.reserve(sel.size() + 4);
  auto local = [&](int g) {
    for (const auto& [src, dst] : remap)
      if (src == g) return dst;
    int id = static_cast<int>(p.x.size());
    remap.emplace_back(g, id);
    p.x.push_back(x[g]);
    p.role.push_back(role[g]);
    return id;
  };
  p.tris.reserve(sel.size());
  for (int t : sel) {
    const Tri& g = tris[t];
    p.tris.push_back({local(g[0]), local(g[1]), local(g[2])});
  }
  if (!crease.empty()) {
    for (size_t i = 0; i < sel.size(); ++i) {
      const Tri& g = tris[sel[i]];
      const Tri& l = p.tris[i];
      for (int k = 0; k < 3; ++k) {
        auto it = crease.find(Edge::edge_key(g[k], g[(k + 1) % 3]));
        if (it != crease.end())
          p.crease.emplace(Edge::edge_key(l[k], l[(k + 1) % 3]), it->second);
      }
    }
  }
  return p;
}

/** Triangle t followed by every other triangle sharing a vertex with it. */
inline std::vector<int> one_ring_selection(const std::vector<Tri>& tris,
                                           int t) {
  std::vector<int> sel{t};
  const Tri& c = tris[t];
  for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
    if (i == t) continue;
    const Tri& o = tris[i];
    bool touch = false;
    for (int a : o)
      if (a == c[0] || a == c[1] || a == c[2]) touch = true;
    if (touch) sel.push_back(i);
  }
  return sel;
}

/** Neighbours of v inside a patch (complete when the patch holds every
 *  triangle around v). */
inline std::vector<int> patch_neighbors(const CreaseMesh& p, int v) {
  std::vector<int> out;
  for (const Tri& t : p.tris) {
    for (int k = 0; k < 3; ++k) {
      if (t[k] != v) continue;
      for (int n : {t[(k + 1) % 3], t[(k + 2) % 3]})
        if (std::find(out.begin(), out.end(), n) == out.end())
          out.push_back(n);
    }
  }
  return out;
}

inline Vec3 patch_vertex_limit(const CreaseMesh& p, int v) {
  switch (p.role[v]) {
    case VertexRole::Point: return p.x[v];
    case VertexRole::Curve: {
      std::vector<int> cn;
      for (int n : patch_neighbors(p, v))
        if (p.crease.count(Edge::edge_key(v, n))) cn.push_back(n);
      if (cn.size() != 2) return p.x[v];
      return limit_position_curve(p.x[cn[0]], p.x[v], p.x[cn[1]]);
    }
    case VertexRole::Surface: {
      std::vector<Vec3> ring;
      for (int n : patch_neighbors(p, v)) ring.push_back(p.x[n]);
      return limit_position_surface(p.x[v], ring);
    }
  }
  return p.x[v];
}

/** Regular-patch control points of triangle 0 in box-spline order, or
 *  false when a stencil triangle is missing. */
inline bool gather_regular_stencil(const CreaseMesh& p,
                                   std::array<Vec3, 12>& out) {
  std::unordered_map<std::uint64_t, int> third;
  third.reserve(p.tris.size() * 3);
  for (const Tri& t : p.tris)
    for (int k = 0; k < 3; ++k)
      third[(std::uint64_t(std::uint32_t(t[k])) << 32) |
            std::uint32_t(t[(k + 1) % 3])] = t[(k + 2) % 3];
  auto find = [&](int a, int b) {
    auto it = third.find((std::uint64_t(std::uint32_t(a)) << 32) |
                         std::uint32_t(b));
    return it == third.end() ? -1 : it->second;
  };
  std::array<int, 13> id{};
  id[8] = p.tris[0][0];
  id[4] = p.tris[0][1];
  id[7] = p.tris[0][2];
  id[5] = find(id[4], id[8]);
  id[3] = find(id[7], id[4]);
  id[11] = find(id[8], id[7]);
  if (id[5] < 0 || id[3] < 0 || id[11] < 0) return false;
  id[9] = find(id[5], id[8]);
  id[12] = find(id[8], id[11]);
  id[1] = find(id[3], id[4]);
  id[2] = find(id[4], id[5]);
  id[6] = find(id[7], id[3]);
  id[10] = find(id[7], id[6] < 0 ? id[3] : id[6]);
  for (int i = 1; i <= 12; ++i)
    if (id[i] < 0) return false;
  for (int i = 1; i <= 12; ++i) out[i - 1] = p.x[id[i]];
  return true;
}

inline LimitSample eval_box_spline(const std::array<Vec3, 12>& cp,
                                   const Bary3& xi) {
  using D = Dual<2>;
  auto n = box_spline_basis(D::variable(xi[1], 0), D::variable(xi[2], 1));
  LimitSample s;
  for (int i = 0; i < 12; ++i) {
    s.point += n[i].v * cp[i];
    s.d1 += n[i].d[0] * cp[i];
    s.d2 += n[i].d[1] * cp[i];
  }
  s.has_derivatives = true;
  return s;
}

/** Child of the 1-to-4 split containing xi and the remapped coordinates. */
inline int select_child(const Bary3& xi, Bary3& out) {
  for (int i = 0; i < 3; ++i) {
    if (xi[i] > 0.5) {
      for (int j = 0; j < 3; ++j) out[j] = 2.0 * xi[j];
      out[i] = 2.0 * xi[i] - 1.0;
      return i;
    }
  }
  for (int j = 0; j < 3; ++j) out[j] = 1.0 - 2.0 * xi[j];
  // Child 3 is (m12, m20, m01); its corner j sits opposite parent corner j.
  return 3;
}

struct SurfaceQuery {
  int slot;
  Bary3 xi;
};

/**
 * Evaluates queries inside triangle 0 of a local patch, refining until
 * each query sits in a triangle with three regular surface vertices.
 */
inline void eval_surface_local(const CreaseMesh& patch,
                               std::vector<SurfaceQuery>& queries, int depth,
                               int depth_cap, std::vector<LimitSample>& out) {
  const Tri t = patch.tris[0];
  std::vector<SurfaceQuery> pending;
  pending.reserve(queries.size());
  for (const auto& q : queries) {
    int corner = -1;
    for (int i = 0; i < 3; ++i)
      if (q.xi[i] == 1.0) corner = i;
    if (corner >= 0) {
      LimitSample s;
      s.point = patch_vertex_limit(patch, t[corner]);
      s.subdivisions = depth;
      out[q.slot] = s;
    } else {
      pending.push_back(q);
    }
  }
  if (pending.empty()) return;

  bool regular = true;
  for (int v : t)
    if (patch.role[v] != VertexRole::Surface ||
        patch_neighbors(patch, v).size() != 6)
      regular = false;
  if (regular) {
    std::array<Vec3, 12> cp;
    if (gather_regular_stencil(patch, cp)) {
      for (const auto& q : pending) {
        LimitSample s = eval_box_spline(cp, q.xi);
        s.subdivisions = depth;
        out[q.slot] = s;
      }
      return;
    }
  }
  if (depth >= depth_cap) {
    for (const auto& q : pending) {
      int best = 0;
      for (int i = 1; i < 3; ++i)
        if (q.xi[i] > q.xi[best]) best = i;
      LimitSample s;
      s.point = patch_vertex_limit(patch, t[best]);
      s.subdivisions = depth;
      s.fallback = true;
      out[q.slot] = s;
    }
    return;
  }

  CreaseMesh fine = refine(patch, false);
  std::array<std::vector<SurfaceQuery>, 4> groups;
  for (const auto& q : pending) {
    Bary3 child_xi;
    int c = select_child(q.xi, child_xi);
    groups[c].push_back({q.slot, child_xi});
  }
  for (int c = 0; c < 4; ++c) {
    if (groups[c].empty()) continue;
    CreaseMesh sub =
        gather_patch(fine.x, fine.role, fine.tris, fine.crease,
                     one_ring_selection(fine.tris, c));
    eval_surface_local(sub, groups[c], depth + 1, depth_cap, out);
  }
}

struct CurveLocal {
  std::array<Vec3, 4> x;
  std::array<VertexRole, 4> role;
};

/** Evaluates the limit curve on segment x[1]..x[2] at t. */
inline LimitSample eval_curve_local(CurveLocal c, double t, int depth_cap) {
  LimitSample s;
  for (int depth = 0;; ++depth) {
    s.subdivisions = depth;
    if (t == 0.0) {
      s.point = c.role[1] == VertexRole::Point
                    ? c.x[1]
                    : limit_position_curve(c.x[0], c.x[1], c.x[2]);
      return s;
    }
    if (t == 1.0) {
      s.point = c.role[2] == VertexRole::Point
                    ? c.x[2]
                    : limit_position_curve(c.x[1], c.x[2], c.x[3]);
      return s;
    }
    if (c.role[1] != VertexRole::Point && c.role[2] != VertexRole::Point) {
      s.point = eval_curve_segment({c.x}, t);
      return s;
    }
    if (depth >= depth_cap) {
      s.point = t < 0.5 ? c.x[1] : c.x[2];
      s.fallback = true;
      return s;
    }
    const Vec3 a = c.role[1] == VertexRole::Point
                       ? c.x[1]
                       : (c.x[0] + 6.0 * c.x[1] + c.x[2]) / 8.0;
    const Vec3 b = c.role[2] == VertexRole::Point
                       ? c.x[2]
                       : (c.x[1] + 6.0 * c.x[2] + c.x[3]) / 8.0;
    const Vec3 m = 0.5 * (c.x[1] + c.x[2]);
    if (t < 0.5) {
      c.x = {0.5 * (c.x[0] + c.x[1]), a, m, b};
      c.role = {VertexRole::Curve, c.role[1], VertexRole::Curve, c.role[2]};
      t = 2.0 * t;
    } else if (t > 0.5) {
      c.x = {a, m, b, 0.5 * (c.x[2] + c.x[3])};
      c.role = {c.role[1], VertexRole::Curve, c.role[2], VertexRole::Curve};
      t = 2.0 * t - 1.0;
    } else {
      s.point = limit_position_curve(a, m, b);
      s.subdivisions = depth + 1;
      return s;
    }
  }
}

}  // namespace detail

/**
 * Evaluates a surface patch stencil. Regular stencils use the box spline;
 * an irregular corner c is handled by local refinement.
 */
inline LimitSample eval_surface_patch(const SurfacePatchStencil& st,
                                      const Bary3& xi, int depth_cap = 48) {
  const int k = st.valence;
  if (k < 3 || static_cast<int>(st.points.size()) != k + 6)
    throw MeshError("eval_surface_patch: stencil needs valence + 6 points");
  // Local numbering: c = 0, ring 1..k, then a, b, d, e, f.
  const int c = 0;
  auto r = [&](int i) { return 1 + ((i % k) + k) % k; };
  const int a = k + 1, b = k + 2, d = k + 3, e = k + 4, f = k + 5;
  detail::CreaseMesh p;
  p.x = st.points;
  p.role.assign(p.x.size(), VertexRole::Surface);
  p.tris.push_back({c, r(0), r(1)});
  for (int i = 1; i < k; ++i) p.tris.push_back({c, r(i), r(i + 1)});
  const int r0 = r(0), r1 = r(1), r2 = r(2), rl = r(k - 1);
  p.tris.push_back({r0, rl, a});
  p.tris.push_back({r0, a, b});
  p.tris.push_back({r0, b, d});
  p.tris.push_back({r0, d, r1});
  p.tris.push_back({r1, d, e});
  p.tris.push_back({r1, e, f});
  p.tris.push_back({r1, f, r2});
  std::vector<detail::SurfaceQuery> q{{0, xi}};
  std::vector<LimitSample> out(1);
  detail::eval_surface_local(p, q, 0, depth_cap, out);
  return out[0];
}

/**
 * Parameterization of the limit model over the triangles of a control mesh.
 * Immutable; evaluation calls may run concurrently.
 */
class LimitEvaluator {
 public:
  LimitEvaluator(SurfaceMesh control, FeatureModel model, int depth_cap = 48)
      : mesh_(std::move(control)),
        model_(std::move(model)),
        index_(mesh_, model_),
        depth_cap_(depth_cap) {
    for (const auto& [id, edges] : model_.curves) {
      auto& segs = curve_segments_[id];
      for (const Edge& e : edges) segs.push_back(e);
    }
  }

  const SurfaceMesh& control() const { return mesh_; }
  const FeatureModel& model() const { return model_; }
  const ModelIndex& index() const { return index_; }
  int depth_cap() const { return depth_cap_; }

  /** Algorithm entry: dispatches to the point, curve or surface branch. */
  LimitSample map_onto_limit(int tri, const Bary3& xi) const {
    std::vector<LimitSample> out(1);
    Bary3 q[1] = {xi};
    map_onto_limit(tri, std::span<const Bary3>(q, 1), out);
    return out[0];
  }

  /** Batched form; work shared between points of the same triangle. */
  void map_onto_limit(int tri, std::span<const Bary3> xis,
                      std::span<LimitSample> out) const {
    if (tri < 0 || tri >= mesh_.num_triangles())
      throw MeshError("map_onto_limit: triangle " + std::to_string(tri) +
                      " out of range");
    const Tri& t = mesh_.triangle(tri);
    std::vector<detail::SurfaceQuery> surface;
    for (size_t i = 0; i < xis.size(); ++i) {
      const Bary3& xi = xis[i];
      check_bary(xi);
      int corner = -1, zero = -1;
      for (int k = 0; k < 3; ++k) {
        if (xi[k] == 1.0) corner = k;
        if (xi[k] == 0.0) zero = k;
      }
      if (corner >= 0) {
        out[i] = vertex_limit(t[corner]);
        continue;
      }
      if (zero >= 0) {
        const int a = t[(zero + 1) % 3], b = t[(zero + 2) % 3];
        if (index_.is_crease(a, b)) {
          out[i] = curve_limit(a, b, xi[(zero + 2) % 3]);
          continue;
        }
      }
      surface.push_back({static_cast<int>(i), xi});
    }
    if (surface.empty()) return;
    std::vector<LimitSample> tmp(xis.size());
    detail::CreaseMesh patch = initial_patch(tri);
    detail::eval_surface_local(patch, surface, 0, depth_cap_, tmp);
    for (const auto& q : surface) out[q.slot] = tmp[q.slot];
  }

  /** Limit curve on the given edge (index into the curve's edge list) at
   *  parameter t measured from the edge's first vertex. */
  LimitSample map_onto_limit_curve(FeatureId curve, int segment,
                                   double t) const {
    auto it = curve_segments_.find(curve);
    if (it == curve_segments_.end() || segment < 0 ||
        segment >= static_cast<int>(it->second.size()))
      throw MeshError("map_onto_limit_curve: unknown curve segment");
    if (!(t >= 0.0 && t <= 1.0))
      throw MeshError("map_onto_limit_curve: parameter outside [0,1]");
    const Edge& e = it->second[segment];
    return curve_limit(e.a, e.b, t);
  }

  /** Surface branch for a point of a feature surface. */
  LimitSample map_onto_limit_surface(FeatureId surface, int tri,
                                     const Bary3& xi) const {
    if (index_.triangle_surface(tri) != surface)
      throw MeshError("map_onto_limit_surface: triangle " +
                      std::to_string(tri) + " not in surface " +
                      std::to_string(surface));
    check_bary(xi);
    std::vector<detail::SurfaceQuery> q{{0, xi}};
    std::vector<LimitSample> out(1);
    detail::eval_surface_local(initial_patch(tri), q, 0, depth_cap_, out);
    return out[0];
  }

  /** Local curve stencil around edge (a, b) of the control mesh. */
  CurveStencil curve_stencil(int a, int b) const {
    auto [p, n] = curve_ends(a, b);
    return {{mesh_.vertex(p), mesh_.vertex(a), mesh_.vertex(b),
             mesh_.vertex(n)}};
  }

 private:
  static void check_bary(const Bary3& xi) {
    double s = xi[0] + xi[1] + xi[2];
    for (double c : xi)
      if (!(c >= 0.0)) throw MeshError("barycentric coordinate negative");
    if (std::abs(s - 1.0) > 1e-12)
      throw MeshError("barycentric coordinates do not sum to one");
  }

  std::pair<int, int> curve_ends(int a, int b) const {
    auto other = [&](int v, int skip) {
      if (index_.role(v) != VertexRole::Curve) return v;
      const auto& cn = index_.crease_neighbors(v);
      return cn[0] == skip ? cn[1] : cn[0];
    };
    return {other(a, b), other(b, a)};
  }

  LimitSample vertex_limit(int v) const {
    LimitSample s;
    const Vec3& x = mesh_.vertex(v);
    switch (index_.role(v)) {
      case VertexRole::Point: s.point = x; break;
      case VertexRole::Curve: {
        const auto& cn = index_.crease_neighbors(v);
        s.point = limit_position_curve(mesh_.vertex(cn[0]), x,
                                       mesh_.vertex(cn[1]));
        break;
      }
      case VertexRole::Surface: {
        std::vector<Vec3> ring;
        for (int n : mesh_.one_ring(v)) ring.push_back(mesh_.vertex(n));
        s.point = limit_position_surface(x, ring);
        break;
      }
    }
    return s;
  }

  LimitSample curve_limit(int a, int b, double t) const {
    auto [p, n] = curve_ends(a, b);
    detail::CurveLocal c;
    c.x = {mesh_.vertex(p), mesh_.vertex(a), mesh_.vertex(b), mesh_.vertex(n)};
    c.role = {index_.role(p), index_.role(a), index_.role(b), index_.role(n)};
    return detail::eval_curve_local(c, t, depth_cap_);
  }

  detail::CreaseMesh initial_patch(int tri) const {
    std::vector<int> sel{tri};
    for (int v : mesh_.triangle(tri))
      for (int o : mesh_.vertex_triangles(v))
        if (std::find(sel.begin(), sel.end(), o) == sel.end())
          sel.push_back(o);
    return detail::gather_patch(mesh_.vertices(), index_.roles(),
                                mesh_.triangles(), index_.crease_map(), sel);
  }

  SurfaceMesh mesh_;
  FeatureModel model_;
  ModelIndex index_;
  int depth_cap_;
  std::map<FeatureId, std::vector<Edge>> curve_segments_;
};

}  // namespace subcurve
