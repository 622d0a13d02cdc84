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

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>

#include "subcurve/feature_model.hpp"

namespace subcurve {

/** Loop vertex weight for valence k. */
inline double loop_weight(int k) {
  const double c = 3.0 / 8.0 + 0.25 * std::cos(2.0 * std::numbers::pi / k);
  return (5.0 / 8.0 - c * c) / k;
}

/** Limit-mask weight for valence k. */
inline double limit_weight(int k) {
  return 1.0 / (k + 3.0 / (8.0 * loop_weight(k)));
}

inline Vec3 limit_position_curve(const Vec3& prev, const Vec3& x,
                                 const Vec3& next) {
  return (prev + 4.0 * x + next) / 6.0;
}

inline Vec3 limit_position_surface(const Vec3& x,
                                   std::span<const Vec3> ring) {
  const int k = static_cast<int>(ring.size());
  if (k < 3)
    throw MeshError("limit_position_surface: valence " + std::to_string(k) +
                    " below 3");
  const double chi = limit_weight(k);
  Vec3 sum = Vec3::Zero();
  for (const auto& p : ring) sum += p;
  return (1.0 - k * chi) * x + chi * sum;
}

/** Feature polyline. Fixed vertices keep their position under refinement;
 *  the ends of an open polyline are always fixed. */
struct Polyline {
  std::vector<Vec3> points;
  std::vector<char> fixed;
  bool closed = false;

  int num_edges() const {
    const int n = static_cast<int>(points.size());
    return closed ? n : n - 1;
  }
};

inline Polyline subdivide_curve(const Polyline& in) {
  const int n = static_cast<int>(in.points.size());
  const int ne = in.num_edges();
  if (ne < 1 || (in.closed && n < 3))
    throw MeshError("subdivide_curve: polyline shorter than one edge");
  auto is_fixed = [&](int i) {
    if (!in.closed && (i == 0 || i == n - 1)) return true;
    return !in.fixed.empty() && in.fixed[i] != 0;
  };
  Polyline out;
  out.closed = in.closed;
  for (int i = 0; i < n; ++i) {
    if (is_fixed(i)) {
      out.points.push_back(in.points[i]);
    } else {
      const Vec3& p = in.points[(i + n - 1) % n];
      const Vec3& q = in.points[(i + 1) % n];
      out.points.push_back((p + 6.0 * in.points[i] + q) / 8.0);
    }
    out.fixed.push_back(is_fixed(i) ? 1 : 0);
    if (i < ne) {
      out.points.push_back(0.5 * (in.points[i] + in.points[(i + 1) % n]));
      out.fixed.push_back(0);
    }
  }
  return out;
}

namespace detail {

/**
 * Triangle mesh with per-vertex roles and crease edges, the working form
 * for both global and local refinement.
 */
struct CreaseMesh {
  std::vector<Vec3> x;
  std::vector<VertexRole> role;
  std::vector<Tri> tris;
  std::vector<FeatureId> tri_tag;
  std::unordered_map<std::uint64_t, FeatureId> crease;
};

struct RefineEdge {
  int a, b;
  int wing[2];
  int count;
  int mid;
};

/**
 * One Loop step with crease rules. Children of triangle t are 4t..4t+3:
 * (t0,m01,m20), (m01,t1,m12), (m20,m12,t2), (m12,m20,m01). Old vertices keep
 * their index and edge midpoints follow in edge order. In lenient mode the
 * fringe of a partial mesh gets arbitrary values instead of an error.
 */
inline CreaseMesh refine(const CreaseMesh& in, bool strict,
                         std::vector<RefineEdge>* edges_out = nullptr) {
  const int nv = static_cast<int>(in.x.size());
  const int nt = static_cast<int>(in.tris.size());
  std::vector<RefineEdge> edges;
  edges.reserve(size_t(nt) * 3 / 2 + 3);
  std::unordered_map<std::uint64_t, int> eidx;
  eidx.reserve(size_t(nt) * 2);
  std::vector<std::array<int, 3>> tri_edges(nt);
  for (int t = 0; t < nt; ++t) {
    const Tri& tri = in.tris[t];
    for (int k = 0; k < 3; ++k) {
      int u = tri[k], v = tri[(k + 1) % 3], w = tri[(k + 2) % 3];
      auto [it, fresh] =
          eidx.emplace(Edge::edge_key(u, v), static_cast<int>(edges.size()));
      if (fresh) edges.push_back({u, v, {w, -1}, 1, -1});
      else {
        auto& e = edges[it->second];
        if (e.count < 2) e.wing[1] = w;
        ++e.count;
      }
      tri_edges[t][k] = it->second;
    }
  }

  std::vector<std::vector<int>> nbrs(nv);
  std::vector<std::vector<int>> cnbrs(nv);
  for (const auto& e : edges) {
    nbrs[e.a].push_back(e.b);
    nbrs[e.b].push_back(e.a);
    if (in.crease.count(Edge::edge_key(e.a, e.b))) {
      cnbrs[e.a].push_back(e.b);
      cnbrs[e.b].push_back(e.a);
    }
  }

  CreaseMesh out;
  const int ne = static_cast<int>(edges.size());
  out.x.resize(nv + ne);
  out.role.resize(nv + ne);
  for (int v = 0; v < nv; ++v) {
    const VertexRole r = in.role[v];
    out.role[v] = r;
    const Vec3& x = in.x[v];
    if (r == VertexRole::Point) {
      out.x[v] = x;
    } else if (r == VertexRole::Curve) {
      if (cnbrs[v].size() == 2) {
        out.x[v] = (in.x[cnbrs[v][0]] + 6.0 * x + in.x[cnbrs[v][1]]) / 8.0;
      } else if (strict) {
        throw MeshError("curve vertex " + std::to_string(v) +
                        " without two curve neighbours");
      } else {
        out.x[v] = x;
      }
    } else {
      const int k = static_cast<int>(nbrs[v].size());
      if (k < 3) {
        if (strict)
          throw MeshError("surface vertex " + std::to_string(v) +
                          " has valence below 3");
        out.x[v] = x;
        continue;
      }
      const double w = loop_weight(k);
      Vec3 sum = Vec3::Zero();
      for (int n : nbrs[v]) sum += in.x[n];
      out.x[v] = (1.0 - k * w) * x + w * sum;
    }
  }
  for (int i = 0; i < ne; ++i) {
    auto& e = edges[i];
    e.mid = nv + i;
    const Vec3& a = in.x[e.a];
    const Vec3& b = in.x[e.b];
    auto cit = in.crease.find(Edge::edge_key(e.a, e.b));
    if (cit != in.crease.end()) {
      out.x[e.mid] = 0.5 * (a + b);
      out.role[e.mid] = VertexRole::Curve;
      out.crease.emplace(Edge::edge_key(e.a, e.mid), cit->second);
      out.crease.emplace(Edge::edge_key(e.mid, e.b), cit->second);
      continue;
    }
    out.role[e.mid] = VertexRole::Surface;
    if (e.count == 2) {
      out.x[e.mid] = 0.375 * (a + b) +
                     0.125 * (in.x[e.wing[0]] + in.x[e.wing[1]]);
    } else if (strict) {
      throw MeshError("interior edge " + edge_str(Edge(e.a, e.b)) +
                      " lacks two incident triangles");
    } else {
      out.x[e.mid] = 0.5 * (a + b);
    }
  }

  out.tris.resize(size_t(nt) * 4);
  if (!in.tri_tag.empty()) out.tri_tag.resize(size_t(nt) * 4);
  for (int t = 0; t < nt; ++t) {
    const Tri& tri = in.tris[t];
    const int m01 = edges[tri_edges[t][0]].mid;
    const int m12 = edges[tri_edges[t][1]].mid;
    const int m20 = edges[tri_edges[t][2]].mid;
    out.tris[4 * t + 0] = {tri[0], m01, m20};
    out.tris[4 * t + 1] = {m01, tri[1], m12};
    out.tris[4 * t + 2] = {m20, m12, tri[2]};
    out.tris[4 * t + 3] = {m12, m20, m01};
    if (!in.tri_tag.empty())
      for (int c = 0; c < 4; ++c) out.tri_tag[4 * t + c] = in.tri_tag[t];
  }
  if (edges_out) *edges_out = std::move(edges);
  return out;
}

inline CreaseMesh to_crease_mesh(const SurfaceMesh& mesh,
                                 const ModelIndex& index) {
  CreaseMesh cm;
  cm.x = mesh.vertices();
  cm.role = index.roles();
  cm.tris = mesh.triangles();
  cm.tri_tag = index.triangle_surfaces();
  cm.crease = index.crease_map();
  return cm;
}

}  // namespace detail

struct RefinedSurface {
  SurfaceMesh mesh;
  FeatureModel model;
};

/** One global Loop step with creases; children keep their parent's ids. */
inline RefinedSurface subdivide_surface(const SurfaceMesh& mesh,
                                        const FeatureModel& model) {
  ModelIndex index(mesh, model);
  std::vector<detail::RefineEdge> edges;
  detail::CreaseMesh cm =
      detail::refine(detail::to_crease_mesh(mesh, index), true, &edges);
  std::unordered_map<std::uint64_t, int> mid;
  for (const auto& e : edges) mid.emplace(Edge::edge_key(e.a, e.b), e.mid);

  RefinedSurface out;
  out.mesh = SurfaceMesh(std::move(cm.x), std::move(cm.tris));
  out.model.points = model.points;
  for (const auto& [id, list] : model.curves) {
    auto& dst = out.model.curves[id];
    for (const Edge& e : list) {
      int m = mid.at(e.key());
      dst.emplace_back(e.a, m);
      dst.emplace_back(m, e.b);
    }
  }
  for (const auto& [id, tris] : model.surfaces) {
    auto& dst = out.model.surfaces[id];
    for (int t : tris)
      for (int c = 0; c < 4; ++c) dst.push_back(4 * t + c);
  }
  return out;
}

/** 1-to-4 split placing new vertices at edge midpoints, numbered as in
 *  subdivide_surface. */
inline SurfaceMesh split_midpoint(const SurfaceMesh& mesh) {
  detail::CreaseMesh cm;
  cm.x = mesh.vertices();
  cm.role.assign(cm.x.size(), VertexRole::Point);
  cm.tris = mesh.triangles();
  std::vector<detail::RefineEdge> edges;
  // Marking every edge as a crease turns all edge points into midpoints.
  for (const auto& e : mesh.edges()) cm.crease.emplace(e.key(), 1);
  detail::CreaseMesh out = detail::refine(cm, false, &edges);
  return SurfaceMesh(std::move(out.x), std::move(out.tris));
}

/** Limit position of every vertex of a mesh under the model's rules. */
inline std::vector<Vec3> limit_positions(const SurfaceMesh& mesh,
                                         const FeatureModel& model) {
  ModelIndex index(mesh, model);
  std::vector<Vec3> out(mesh.num_vertices());
  std::vector<Vec3> ring;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec3& x = mesh.vertex(v);
    switch (index.role(v)) {
      case VertexRole::Point: out[v] = x; break;
      case VertexRole::Curve: {
        const auto& cn = index.crease_neighbors(v);
        out[v] = limit_position_curve(mesh.vertex(cn[0]), x,
                                      mesh.vertex(cn[1]));
        break;
      }
      case VertexRole::Surface: {
        if (mesh.valence(v) == 0) {
          out[v] = x;
          break;
        }
        ring.clear();
        for (int n : mesh.one_ring(v)) ring.push_back(mesh.vertex(n));
        out[v] = limit_position_surface(x, ring);
        break;
      }
    }
  }
  return out;
}

struct ControlMesh {
  SurfaceMesh mesh;
  FeatureModel model;
  double residual = 0.0;
  double tolerance = 0.0;
  bool direct = true;
};

struct ControlOptions {
  int direct_limit = 200000;
  double relative_tolerance = 1e-10;
};

/**
 * Solves L X^C = X^0 so that the limit positions of the returned control
 * vertices are the input vertices.
 */
inline ControlMesh compute_control_mesh(const SurfaceMesh& mesh,
                                        const FeatureModel& model,
                                        const ControlOptions& opt = {}) {
  ModelIndex index(mesh, model);
  const int n = mesh.num_vertices();
  using Sparse = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(size_t(n) * 8);
  for (int v = 0; v < n; ++v) {
    switch (index.role(v)) {
      case VertexRole::Point: trip.emplace_back(v, v, 1.0); break;
      case VertexRole::Curve: {
        const auto& cn = index.crease_neighbors(v);
        trip.emplace_back(v, v, 4.0 / 6.0);
        trip.emplace_back(v, cn[0], 1.0 / 6.0);
        trip.emplace_back(v, cn[1], 1.0 / 6.0);
        break;
      }
      case VertexRole::Surface: {
        const int k = mesh.valence(v);
        if (k == 0) {
          trip.emplace_back(v, v, 1.0);
          break;
        }
        const double chi = limit_weight(k);
        trip.emplace_back(v, v, 1.0 - k * chi);
        for (int r : mesh.one_ring(v)) trip.emplace_back(v, r, chi);
        break;
      }
    }
  }
  Sparse L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  L.makeCompressed();
  Eigen::MatrixXd rhs(n, 3);
  for (int v = 0; v < n; ++v) rhs.row(v) = mesh.vertex(v).transpose();

  ControlMesh out;
  out.tolerance =
      opt.relative_tolerance * std::max(bounding_box(mesh.vertices()).diagonal(), 1e-300);
  Eigen::MatrixXd xc;
  if (n <= opt.direct_limit) {
    Eigen::SparseLU<Sparse> lu;
    lu.compute(L);
    if (lu.info() != Eigen::Success)
      throw SolverError("control mesh factorization failed", -1.0);
    xc = lu.solve(rhs);
    out.direct = true;
  } else {
    Eigen::BiCGSTAB<Sparse, Eigen::IncompleteLUT<double>> it;
    it.setTolerance(opt.relative_tolerance * 1e-2);
    it.setMaxIterations(10000);
    it.compute(L);
    xc = it.solve(rhs);
    out.direct = false;
  }
  out.residual = (L * xc - rhs).cwiseAbs().maxCoeff();
  if (!(out.residual <= out.tolerance))
    throw SolverError("control mesh solve residual " +
                          std::to_string(out.residual) + " exceeds bound " +
                          std::to_string(out.tolerance),
                      out.residual);
  std::vector<Vec3> pos(n);
  for (int v = 0; v < n; ++v) pos[v] = xc.row(v).transpose();
  out.mesh = mesh.with_positions(std::move(pos));
  out.model = model;
  return out;
}

}  // namespace subcurve
