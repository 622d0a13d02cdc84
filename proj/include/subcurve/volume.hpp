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

#include <bit>
#include <set>

#include "subcurve/boundary.hpp"
#include "subcurve/interpolation.hpp"

namespace subcurve {

// Feature smoothing.

struct SmoothingPlan {
  std::vector<FeatureId> curves;
  std::vector<FeatureId> points;

  bool empty() const { return curves.empty() && points.empty(); }
};

/**
 * Removes the planned curves, merging the surfaces on either side into the
 * smallest of their ids, then removes the planned points, joining their two
 * curves into the smaller curve id. Coordinates and connectivity are not
 * touched.
 */
inline FeatureModel smooth_features(const SurfaceMesh& mesh, FeatureModel model,
                                    const SmoothingPlan& plan) {
  validate_model(mesh, model);
  std::vector<FeatureId> tri_surface = surface_tags(mesh, model);

  for (FeatureId cid : plan.curves) {
    auto it = model.curves.find(cid);
    if (it == model.curves.end())
      throw MeshError("smoothing plan: unknown curve " + std::to_string(cid));
    std::set<FeatureId> incident;
    for (const Edge& e : it->second) {
      const auto& tt = mesh.edge_triangles(mesh.edge_index(e.a, e.b));
      if (tt[1] < 0)
        throw MeshError("smoothing plan: curve " + std::to_string(cid) +
                        " lies on an open boundary");
      incident.insert(tri_surface[tt[0]]);
      incident.insert(tri_surface[tt[1]]);
    }
    model.curves.erase(it);
    const FeatureId keep = *incident.begin();
    for (FeatureId s : incident) {
      if (s == keep) continue;
      auto& dst = model.surfaces[keep];
      const auto& src = model.surfaces[s];
      dst.insert(dst.end(), src.begin(), src.end());
      model.surfaces.erase(s);
    }
    std::sort(model.surfaces[keep].begin(), model.surfaces[keep].end());
    for (FeatureId& t : tri_surface)
      if (incident.count(t)) t = keep;
  }

  for (FeatureId pid : plan.points) {
    auto it = model.points.find(pid);
    if (it == model.points.end())
      throw MeshError("smoothing plan: unknown point " + std::to_string(pid));
    const int v = it->second;
    // Curve ends at v: (curve id, true if the curve starts at v).
    std::vector<std::pair<FeatureId, bool>> ends;
    for (const auto& [cid, edges] : model.curves) {
      if (edges.front().a == v) ends.emplace_back(cid, true);
      if (edges.back().b == v) ends.emplace_back(cid, false);
      for (size_t k = 1; k < edges.size(); ++k)
        if (edges[k].a == v)
          throw MeshError("smoothing plan: point " + std::to_string(pid) +
                          " lies inside curve " + std::to_string(cid));
    }
    if (ends.size() == 1 || ends.size() > 2)
      throw MeshError("smoothing plan: point " + std::to_string(pid) + " has " +
                      std::to_string(ends.size()) +
                      " incident curves; only 0 or 2 can be smoothed");
    model.points.erase(it);
    if (ends.empty() || ends[0].first == ends[1].first) continue;

    auto& a = model.curves[ends[0].first];
    auto& b = model.curves[ends[1].first];
    auto reverse = [](std::vector<Edge>& c) {
      std::reverse(c.begin(), c.end());
      for (Edge& e : c) e = e.reversed();
    };
    // Orient the chain as a -> v -> b.
    if (ends[0].second) reverse(a);
    if (!ends[1].second) reverse(b);
    std::vector<Edge> joined = a;
    joined.insert(joined.end(), b.begin(), b.end());
    const FeatureId keep = std::min(ends[0].first, ends[1].first);
    model.curves.erase(ends[0].first);
    model.curves.erase(ends[1].first);
    model.curves[keep] = std::move(joined);
  }
  validate_model(mesh, model);
  return model;
}

// Transfinite interpolation.

/** Straight segment nodes x_k = (1 - t_k) a + t_k b. */
inline std::vector<Vec3> tfi_edge(const Vec3& a, const Vec3& b,
                                  std::span<const double> params) {
  std::vector<Vec3> out;
  for (double t : params) out.push_back((1.0 - t) * a + t * b);
  return out;
}

/**
 * Interior nodes of a simplex as fixed linear combinations of its boundary
 * nodes, from the blending of projections onto faces, edges and vertices.
 */
struct TfiWeights {
  int dim = 2;
  int degree = 1;
  /** Local indices of the interior nodes. */
  std::vector<int> targets;
  /** targets x nodes; columns of interior nodes are zero. */
  Eigen::MatrixXd w;
};

inline TfiWeights tfi_weights(const NodalDistribution& dist) {
  const int d = dist.dim, n = dist.size();
  if (d != 2 && d != 3) throw UnsupportedError("TFI needs a triangle or a tet");
  const NodalBasis basis = make_basis(dist);
  TfiWeights tw;
  tw.dim = d;
  tw.degree = dist.degree;
  for (int i = 0; i < n; ++i) {
    bool interior = true;
    for (int k = 0; k <= d; ++k) interior = interior && dist.lattice[i][k] > 0;
    if (interior) tw.targets.push_back(i);
  }
  tw.w = Eigen::MatrixXd::Zero(tw.targets.size(), n);
  std::vector<double> phi(n);
  for (size_t r = 0; r < tw.targets.size(); ++r) {
    const Bary4& lam = dist.points[tw.targets[r]];
    for (int j = 0; j <= d; ++j) {
      // Nonempty subsets S of the other vertices: the entity without S.
      std::vector<int> others;
      for (int k = 0; k <= d; ++k)
        if (k != j) others.push_back(k);
      for (int mask = 1; mask < (1 << d); ++mask) {
        const int removed = std::popcount(static_cast<unsigned>(mask));
        const double sign = removed % 2 == 1 ? 1.0 : -1.0;
        Bary4 p{0, 0, 0, 0};
        double kept = 0.0;
        std::vector<char> gone(d + 1, 0);
        for (int s = 0; s < d; ++s)
          if (mask & (1 << s)) gone[others[s]] = 1;
        for (int k = 0; k <= d; ++k)
          if (k != j && !gone[k]) {
            p[k] = lam[k];
            kept += lam[k];
          }
        p[j] = 1.0 - kept;
        basis.values(p.data(), phi.data());
        for (int m = 0; m < n; ++m) {
          bool on = true;
          for (int k = 0; k <= d; ++k)
            if (gone[k] && dist.lattice[m][k] != 0) on = false;
          if (on) tw.w(r, m) += sign * lam[j] * phi[m];
        }
      }
    }
  }
  return tw;
}

/** Overwrites the interior nodes of one simplex, nodes in lattice order. */
inline void tfi_apply(const TfiWeights& tw, std::span<Vec3> nodes) {
  for (size_t r = 0; r < tw.targets.size(); ++r) {
    Vec3 x = Vec3::Zero();
    for (int m = 0; m < tw.w.cols(); ++m)
      if (tw.w(r, m) != 0.0) x += tw.w(r, m) * nodes[m];
    nodes[tw.targets[r]] = x;
  }
}

/** Interior face nodes from fixed vertex and edge nodes (triangle lattice
 *  order). */
inline void tfi_face(const NodalDistribution& tri, std::span<Vec3> nodes) {
  tfi_apply(tfi_weights(tri), nodes);
}

/** Interior tet nodes from fixed face, edge and vertex nodes. */
inline void tfi_tet(const NodalDistribution& tet, std::span<Vec3> nodes) {
  tfi_apply(tfi_weights(tet), nodes);
}

namespace detail {

/** Local tet node of each triangle lattice node of a face with local
 *  vertices f, and of each segment lattice node of an edge. */
inline std::vector<int> sub_lattice(const std::vector<Multi>& tet_lattice,
                                    const std::vector<Multi>& sub,
                                    std::span<const int> verts) {
  std::map<Multi, int> pos;
  for (int i = 0; i < static_cast<int>(tet_lattice.size()); ++i)
    pos[tet_lattice[i]] = i;
  std::vector<int> out;
  for (const Multi& m : sub) {
    Multi t{0, 0, 0, 0};
    for (size_t k = 0; k < verts.size(); ++k) t[verts[k]] = m[k];
    out.push_back(pos.at(t));
  }
  return out;
}

}  // namespace detail

/**
 * Relocates the nodes of every tet that owns a relocated node: straight
 * edges between the current vertices, then face interiors, then tet
 * interiors. Entities on the boundary (faces owned by one tet, and their
 * edges) keep their nodes. Each shared entity is computed once.
 */
inline void accommodate_curvature(HighOrderMesh& ho,
                                  const std::vector<char>& relocated) {
  if (ho.dim != 3) throw UnsupportedError("TFI accommodation needs tets");
  const int q = ho.degree;
  if (q < 2) return;
  const NodalDistribution tet = make_distribution(q, NodeKind::Equispaced, 3);
  const NodalDistribution tri = make_distribution(q, NodeKind::Equispaced, 2);
  const TfiWeights wf = tfi_weights(tri);
  const TfiWeights wt = tfi_weights(tet);

  std::map<std::array<int, 3>, int> face_count;
  for (int e = 0; e < ho.num_elements(); ++e) {
    const auto& el = ho.elements[e];
    for (const auto& f : kTetFaces)
      ++face_count[detail::sorted3(el[f[0]], el[f[1]], el[f[2]])];
  }
  std::set<std::uint64_t> boundary_edges;
  for (const auto& [key, c] : face_count)
    if (c == 1) {
      boundary_edges.insert(Edge::edge_key(key[0], key[1]));
      boundary_edges.insert(Edge::edge_key(key[1], key[2]));
      boundary_edges.insert(Edge::edge_key(key[0], key[2]));
    }

  std::vector<int> affected;
  for (int e = 0; e < ho.num_elements(); ++e)
    for (int g : ho.elements[e])
      if (relocated[g]) {
        affected.push_back(e);
        break;
      }

  // Unique interior entities in element order: (element, local vertices).
  std::vector<std::pair<int, std::array<int, 2>>> edges;
  std::vector<std::pair<int, std::array<int, 3>>> faces;
  std::set<std::uint64_t> seen_edges;
  std::set<std::array<int, 3>> seen_faces;
  for (int e : affected) {
    const auto& el = ho.elements[e];
    for (const auto& le : kTetEdges) {
      std::array<int, 2> lv = le;
      if (el[lv[0]] > el[lv[1]]) std::swap(lv[0], lv[1]);
      const std::uint64_t key = Edge::edge_key(el[lv[0]], el[lv[1]]);
      if (!boundary_edges.count(key) && seen_edges.insert(key).second)
        edges.push_back({e, lv});
    }
    for (const auto& lf : kTetFaces) {
      std::array<int, 3> lv = lf;
      std::sort(lv.begin(), lv.end(),
                [&](int x, int y) { return el[x] < el[y]; });
      auto key = detail::sorted3(el[lf[0]], el[lf[1]], el[lf[2]]);
      if (face_count[key] == 2 && seen_faces.insert(key).second)
        faces.push_back({e, lv});
    }
  }

  const std::vector<Multi> seg = simplex_lattice(1, q);
  const std::vector<Multi> tri_lattice = simplex_lattice(2, q);
  parallel_for(static_cast<int>(edges.size()), [&](int i) {
    const auto& [e, lv] = edges[i];
    const auto& el = ho.elements[e];
    auto loc = detail::sub_lattice(tet.lattice, seg, lv);
    const Vec3 a = ho.nodes[el[lv[0]]], b = ho.nodes[el[lv[1]]];
    for (int k : loc) {
      if (tet.lattice[k][lv[0]] == 0 || tet.lattice[k][lv[1]] == 0) continue;
      const double t = tet.points[k][lv[1]];
      ho.nodes[el[k]] = (1.0 - t) * a + t * b;
    }
  });
  parallel_for(static_cast<int>(faces.size()), [&](int i) {
    const auto& [e, lv] = faces[i];
    const auto& el = ho.elements[e];
    auto loc = detail::sub_lattice(tet.lattice, tri_lattice, lv);
    std::vector<Vec3> x(loc.size());
    for (size_t k = 0; k < loc.size(); ++k) x[k] = ho.nodes[el[loc[k]]];
    tfi_apply(wf, x);
    for (int r : wf.targets) ho.nodes[el[loc[r]]] = x[r];
  });
  parallel_for(static_cast<int>(affected.size()), [&](int i) {
    const auto& el = ho.elements[affected[i]];
    std::vector<Vec3> x(el.size());
    for (size_t k = 0; k < el.size(); ++k) x[k] = ho.nodes[el[k]];
    tfi_apply(wt, x);
    for (int r : wt.targets) ho.nodes[el[r]] = x[r];
  });
}

// Quality.

struct QualityReport {
  /** boundary, no-TFI, TFI or post-optimization-hook. */
  std::string stage;
  std::vector<double> quality;
  double min_quality = 1.0;
  int inverted = 0;
  std::vector<int> invalid;
};

/** Pointwise shape distortion ||J||_F^2 / (d det(J)^(2/d)); +inf when
 *  det(J) <= 0. */
inline double shape_distortion(double frob2, double det, int d) {
  if (!(det > 0.0)) return std::numeric_limits<double>::infinity();
  return frob2 / (d * std::pow(det, 2.0 / d));
}

/**
 * 1 / RMS distortion of the map from the straight element with the given
 * vertices to element e, over a degree-2q quadrature rule. 0 when the
 * Jacobian determinant is not positive at a quadrature point or a node.
 */
inline double element_quality(const HighOrderMesh& ho, const NodalBasis& basis,
                              int e, std::span<const Vec3> ref,
                              const Quadrature& quad,
                              std::span<const Bary4> nodes) {
  const int d = ho.dim;
  Eigen::Matrix<double, 3, Eigen::Dynamic> A(3, d);
  for (int k = 0; k < d; ++k) A.col(k) = ref[k + 1] - ref[0];
  double ref_scale = 0.0;
  for (int k = 0; k < d; ++k) ref_scale = std::max(ref_scale, A.col(k).norm());
  // Straight element in its own orthonormal frame.
  Eigen::MatrixXd R;
  Vec3 ref_normal = Vec3::Zero();
  if (d == 3) {
    R = A;
  } else {
    Eigen::HouseholderQR<Eigen::Matrix<double, 3, Eigen::Dynamic>> qr(A);
    R = qr.matrixQR().topRows(2).triangularView<Eigen::Upper>();
    ref_normal = A.col(0).cross(A.col(1));
  }
  const double rdet = R.determinant();
  if (!(std::abs(rdet) > 1e-14 * std::pow(ref_scale, d)))
    throw MeshError("element_quality: singular reference element " +
                    std::to_string(e));
  const Eigen::MatrixXd Rinv = R.inverse();

  // Returns the distortion, or +inf when inverted.
  auto eta = [&](const double* lam) {
    Eigen::Matrix<double, 3, Eigen::Dynamic> B = element_jacobian(ho, basis, e, lam);
    if (d == 3) {
      Eigen::Matrix3d J = B * Rinv;
      return shape_distortion(J.squaredNorm(), J.determinant(), 3);
    }
    Eigen::Matrix<double, 3, 2> J = B * Rinv;
    // Metric form; orientation against the straight element's normal.
    const double det = std::sqrt(std::max(0.0, (J.transpose() * J).determinant()));
    const double orient = B.col(0).cross(B.col(1)).dot(ref_normal);
    return shape_distortion(J.squaredNorm(), orient > 0.0 ? det : -1.0, 2);
  };
  for (const Bary4& p : nodes)
    if (!std::isfinite(eta(p.data()))) return 0.0;
  double acc = 0.0;
  for (size_t i = 0; i < quad.points.size(); ++i) {
    const double v = eta(quad.points[i].data());
    if (!std::isfinite(v)) return 0.0;
    acc += quad.weights[i] * v * v;
  }
  return 1.0 / std::sqrt(acc);
}

/** Quality of every element against straight elements on the reference
 *  vertex positions (indexed like the mesh's vertex nodes). */
inline QualityReport quality_report(const HighOrderMesh& ho,
                                    std::span<const Vec3> reference,
                                    std::string stage) {
  const NodalDistribution dist = make_distribution(
      ho.degree, ho.dim == 3 ? NodeKind::Equispaced : ho.kind, ho.dim);
  const NodalBasis basis = make_basis(dist);
  const Quadrature quad = simplex_quadrature(ho.dim, 2 * ho.degree);
  QualityReport r;
  r.stage = std::move(stage);
  r.quality.assign(ho.num_elements(), 0.0);
  parallel_for(ho.num_elements(), [&](int e) {
    std::vector<Vec3> ref;
    for (int v : ho.element_vertices(e)) ref.push_back(reference[v]);
    r.quality[e] = element_quality(ho, basis, e, ref, quad, dist.points);
  });
  for (int e = 0; e < ho.num_elements(); ++e) {
    r.min_quality = std::min(r.min_quality, r.quality[e]);
    if (r.quality[e] == 0.0) {
      ++r.inverted;
      r.invalid.push_back(e);
    }
  }
  if (ho.num_elements() == 0) r.min_quality = 0.0;
  return r;
}

// Volume pipeline.

/** Straight-sided degree-q tet mesh on equispaced nodes. */
inline HighOrderMesh elevate_volume(const VolumeMesh& mesh, int q) {
  const NodalDistribution dist = make_distribution(q, NodeKind::Equispaced, 3);
  HoTopology topo = build_ho_topology(mesh.tets(), mesh.num_vertices(), q);
  HighOrderMesh ho;
  ho.dim = 3;
  ho.degree = q;
  ho.kind = NodeKind::Equispaced;
  ho.elements = std::move(topo.elements);
  ho.element_tags.assign(mesh.num_tets(), 1);
  ho.nodes.assign(topo.num_nodes, Vec3::Zero());
  for (int v = 0; v < mesh.num_vertices(); ++v) ho.nodes[v] = mesh.vertex(v);
  parallel_for(topo.num_nodes, [&](int g) {
    auto [e, local] = topo.owner[g];
    if (e < 0 || g < mesh.num_vertices()) return;
    const Tet& t = mesh.tet(e);
    const Bary4& l = dist.points[local];
    ho.nodes[g] = l[0] * mesh.vertex(t[0]) + l[1] * mesh.vertex(t[1]) +
                  l[2] * mesh.vertex(t[2]) + l[3] * mesh.vertex(t[3]);
  });
  return ho;
}

/** Maps a straight boundary node to its curved position. */
using BoundaryMap = std::function<Vec3(const Vec3&)>;
/** Called after TFI with the mesh and its TFI quality report. */
using OptimizeHook = std::function<void(HighOrderMesh&, const QualityReport&)>;

struct VolumeCurvingOptions {
  int depth_cap = 48;
  /** Replaces the limit model as the source of boundary nodes; applied to
   *  every straight boundary node, vertices included. */
  BoundaryMap boundary_map;
  bool apply_tfi = true;
  OptimizeHook optimize;
};

struct VolumeCurvingResult {
  HighOrderMesh mesh;
  /** Mesh right after boundary replacement. */
  HighOrderMesh pre_tfi;
  HighOrderMesh surface;
  BoundaryExtraction boundary;
  std::shared_ptr<const LimitEvaluator> evaluator;
  /** Volume node of each surface node. */
  std::vector<int> surface_to_volume;
  std::vector<QualityReport> reports;
  int relocated_nodes = 0;
};

/**
 * Copies the surface nodes onto the boundary faces of the volume. Returns
 * the volume node of every surface node.
 */
inline std::vector<int> replace_boundary(HighOrderMesh& vol,
                                         const HighOrderMesh& surf,
                                         const BoundaryExtraction& b) {
  if (vol.degree != surf.degree)
    throw MeshError("replace_boundary: degree mismatch");
  const int q = vol.degree;
  const auto tet_lattice = simplex_lattice(3, q);
  const auto tri_lattice = simplex_lattice(2, q);
  std::array<std::vector<int>, 4> face_nodes;
  for (int f = 0; f < 4; ++f)
    face_nodes[f] = detail::sub_lattice(tet_lattice, tri_lattice, kTetFaces[f]);
  std::vector<int> map(surf.num_nodes(), -1);
  for (int t = 0; t < surf.num_elements(); ++t) {
    auto [e, f] = b.face_of[t];
    for (size_t i = 0; i < tri_lattice.size(); ++i) {
      const int sv = surf.elements[t][i];
      const int vv = vol.elements[e][face_nodes[f][i]];
      if (map[sv] >= 0 && map[sv] != vv)
        throw MeshError("replace_boundary: inconsistent node correspondence");
      map[sv] = vv;
      vol.nodes[vv] = surf.nodes[sv];
    }
  }
  for (int v = 0; v < static_cast<int>(b.to_volume.size()); ++v)
    if (map[v] != b.to_volume[v])
      throw MeshError("replace_boundary: vertex correspondence failure");
  return map;
}

/** Boundary-extracted variant; the model in `b` may differ from the
 *  tagged one (after smoothing). */
inline VolumeCurvingResult generate_ho_volume_mesh(
    const VolumeMesh& mesh, BoundaryExtraction b, int q,
    const VolumeCurvingOptions& opt = {}) {
  VolumeCurvingResult res;
  const NodalDistribution tri = make_distribution(q, NodeKind::Equispaced, 2);
  if (opt.boundary_map) {
    res.surface = elevate_surface(b.surface, b.model, tri);
    for (Vec3& x : res.surface.nodes) x = opt.boundary_map(x);
  } else {
    SurfaceCurvingOptions so;
    so.depth_cap = opt.depth_cap;
    SurfaceCurvingResult sr = generate_ho_surface_mesh(b.surface, b.model, tri, so);
    res.surface = std::move(sr.mesh);
    res.evaluator = std::move(sr.evaluator);
  }
  res.reports.push_back(
      quality_report(res.surface, b.surface.vertices(), "boundary"));

  HighOrderMesh vol = elevate_volume(mesh, q);
  const std::vector<Vec3> straight = vol.nodes;
  res.surface_to_volume = replace_boundary(vol, res.surface, b);
  std::vector<char> relocated(vol.num_nodes(), 0);
  for (int n = 0; n < vol.num_nodes(); ++n)
    if (vol.nodes[n] != straight[n]) {
      relocated[n] = 1;
      ++res.relocated_nodes;
    }

  // Induced model in volume numbering.
  for (const HoCurveSegment& c : res.surface.curves) {
    HoCurveSegment s{c.curve, {}};
    for (int n : c.nodes) s.nodes.push_back(res.surface_to_volume[n]);
    vol.curves.push_back(std::move(s));
  }
  for (const auto& [id, v] : b.model.points) vol.points[id] = b.to_volume[v];
  const std::vector<FeatureId> tags = surface_tags(b.surface, b.model);
  for (int t = 0; t < res.surface.num_elements(); ++t) {
    HoFacet f{tags[t], {}};
    for (int n : res.surface.elements[t])
      f.nodes.push_back(res.surface_to_volume[n]);
    vol.facets.push_back(std::move(f));
  }

  res.pre_tfi = vol;
  res.reports.push_back(quality_report(vol, mesh.vertices(), "no-TFI"));
  if (opt.apply_tfi) {
    accommodate_curvature(vol, relocated);
    res.reports.push_back(quality_report(vol, mesh.vertices(), "TFI"));
  }
  if (opt.optimize) {
    opt.optimize(vol, res.reports.back());
    res.reports.push_back(
        quality_report(vol, mesh.vertices(), "post-optimization-hook"));
  }
  res.mesh = std::move(vol);
  res.boundary = std::move(b);
  return res;
}

/** Boundary extraction, degree-q surface, elevation, replacement and TFI. */
inline VolumeCurvingResult generate_ho_volume_mesh(
    const VolumeMesh& mesh, const VolumeFeatures& features, int q,
    const VolumeCurvingOptions& opt = {}) {
  return generate_ho_volume_mesh(mesh, extract_boundary(mesh, features), q, opt);
}

/** Feature smoothing followed by the volume pipeline. */
inline VolumeCurvingResult curve_volume_mesh(const VolumeMesh& mesh,
                                             const VolumeFeatures& features,
                                             int q, const SmoothingPlan& plan,
                                             const VolumeCurvingOptions& opt = {}) {
  BoundaryExtraction b = extract_boundary(mesh, features);
  b.model = smooth_features(b.surface, std::move(b.model), plan);
  return generate_ho_volume_mesh(mesh, std::move(b), q, opt);
}

}  // namespace subcurve
