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

#include <map>
#include <set>

#include "subcurve/mesh.hpp"

namespace subcurve {

enum class VertexRole : std::uint8_t { Surface, Curve, Point };

inline const char* role_name(VertexRole r) {
  switch (r) {
    case VertexRole::Surface: return "surface";
    case VertexRole::Curve: return "curve";
    case VertexRole::Point: return "point";
  }
  return "?";
}

/**
 * Feature points, curves and surfaces attached to a surface mesh. Curves
 * list their edges in traversal order. Ids live in three independent
 * namespaces.
 */
struct FeatureModel {
  std::map<FeatureId, int> points;
  std::map<FeatureId, std::vector<Edge>> curves;
  std::map<FeatureId, std::vector<int>> surfaces;

  bool operator==(const FeatureModel& o) const {
    return points == o.points && curves == o.curves && surfaces == o.surfaces;
  }

  /** Model with one surface holding every triangle and nothing else. */
  static FeatureModel single_surface(int num_triangles, FeatureId id = 1) {
    FeatureModel m;
    auto& tris = m.surfaces[id];
    for (int t = 0; t < num_triangles; ++t) tris.push_back(t);
    return m;
  }
};

struct VertexClass {
  int valence = 0;
  bool regular = false;
  VertexRole role = VertexRole::Surface;
};

namespace detail {

/** Chains a set of edges into maximal polylines that only stop at the
 *  given break vertices; remaining cycles start at their lowest-index
 *  edge. */
inline std::vector<std::vector<Edge>> trace_chains(
    const SurfaceMesh& mesh, const std::vector<int>& edge_ids,
    const std::vector<char>& is_break) {
  std::unordered_map<int, std::vector<int>> at;  // vertex -> edge ids
  std::vector<int> sorted = edge_ids;
  std::sort(sorted.begin(), sorted.end());
  for (int e : sorted) {
    at[mesh.edges()[e].a].push_back(e);
    at[mesh.edges()[e].b].push_back(e);
  }
  std::unordered_map<int, char> used;
  auto walk = [&](int start_vertex, int first_edge) {
    std::vector<Edge> chain;
    int v = start_vertex, e = first_edge;
    while (true) {
      used[e] = 1;
      const Edge& ed = mesh.edges()[e];
      int w = ed.a == v ? ed.b : ed.a;
      chain.emplace_back(v, w);
      v = w;
      if (is_break[v]) break;
      int next = -1;
      for (int c : at[v])
        if (!used[c]) {
          next = c;
          break;
        }
      if (next < 0) break;
      e = next;
    }
    return chain;
  };

  std::vector<std::vector<Edge>> chains;
  std::vector<int> starts;
  for (auto& [v, list] : at)
    if (is_break[v]) starts.push_back(v);
  std::sort(starts.begin(), starts.end());
  for (int v : starts) {
    std::vector<int> list = at[v];
    std::sort(list.begin(), list.end(), [&](int x, int y) {
      const Edge& ex = mesh.edges()[x];
      const Edge& ey = mesh.edges()[y];
      return (ex.a == v ? ex.b : ex.a) < (ey.a == v ? ey.b : ey.a);
    });
    for (int e : list)
      if (!used[e]) chains.push_back(walk(v, e));
  }
  for (int e : sorted)
    if (!used[e]) chains.push_back(walk(mesh.edges()[e].a, e));
  return chains;
}

}  // namespace detail

/**
 * Per-entity lookups for a mesh/model pair. Construction validates the
 * model against the mesh and throws MeshError on violations.
 */
class ModelIndex {
 public:
  ModelIndex() = default;

  ModelIndex(const SurfaceMesh& mesh, const FeatureModel& model) {
    const int nt = mesh.num_triangles();
    const int nv = mesh.num_vertices();
    tri_surface_.assign(nt, 0);
    std::vector<char> tagged(nt, 0);
    for (const auto& [id, tris] : model.surfaces) {
      for (int t : tris) {
        if (t < 0 || t >= nt)
          throw MeshError("surface " + std::to_string(id) +
                          " references missing triangle " +
                          std::to_string(t));
        if (tagged[t])
          throw MeshError("triangle " + std::to_string(t) +
                          " belongs to more than one surface");
        tagged[t] = 1;
        tri_surface_[t] = id;
      }
    }
    for (int t = 0; t < nt; ++t)
      if (!tagged[t])
        throw MeshError("triangle " + std::to_string(t) +
                        " has no surface id");

    edge_curve_.reserve(64);
    crease_nbrs_.assign(nv, {});
    for (const auto& [id, edges] : model.curves) {
      if (edges.empty())
        throw MeshError("curve " + std::to_string(id) + " has no edges");
      for (const Edge& e : edges) {
        if (mesh.edge_index(e.a, e.b) < 0)
          throw MeshError("curve " + std::to_string(id) + " edge " +
                          edge_str(e) + " is not a mesh edge");
        if (!edge_curve_.emplace(e.key(), id).second)
          throw MeshError("edge " + edge_str(e) +
                          " belongs to more than one curve");
        crease_nbrs_[e.a].push_back(e.b);
        crease_nbrs_[e.b].push_back(e.a);
      }
    }

    role_.assign(nv, VertexRole::Surface);
    point_id_.assign(nv, 0);
    for (const auto& [id, v] : model.points) {
      if (v < 0 || v >= nv)
        throw MeshError("point " + std::to_string(id) +
                        " references missing vertex " + std::to_string(v));
      if (role_[v] == VertexRole::Point)
        throw MeshError("vertex " + std::to_string(v) +
                        " carries more than one point id");
      role_[v] = VertexRole::Point;
      point_id_[v] = id;
    }

    for (int e = 0; e < mesh.num_edges(); ++e) {
      const Edge& ed = mesh.edges()[e];
      const auto& tt = mesh.edge_triangles(e);
      bool interface =
          tt[1] < 0 || tri_surface_[tt[0]] != tri_surface_[tt[1]];
      if (interface && !edge_curve_.count(ed.key()))
        throw MeshError(std::string(tt[1] < 0 ? "boundary" : "interface") +
                        " edge " + edge_str(ed) + " is not a curve edge");
    }

    for (int v = 0; v < nv; ++v) {
      if (role_[v] == VertexRole::Point) continue;
      const size_t cv = crease_nbrs_[v].size();
      if (cv == 0) {
        if (mesh.valence(v) == 0) continue;
        if (mesh.is_boundary_vertex(v))
          throw MeshError("boundary vertex " + std::to_string(v) +
                          " is not on a curve");
        if (mesh.valence(v) < 3)
          throw MeshError("surface vertex " + std::to_string(v) +
                          " has valence below 3");
        continue;
      }
      if (cv != 2)
        throw MeshError("vertex " + std::to_string(v) + " joins " +
                        std::to_string(cv) +
                        " curve edges but is not a feature point");
      if (mesh.valence(v) <= 2)
        throw MeshError("on-curve vertex " + std::to_string(v) +
                        " has valence 2");
      role_[v] = VertexRole::Curve;
    }
  }

  FeatureId triangle_surface(int t) const { return tri_surface_[t]; }
  const std::vector<FeatureId>& triangle_surfaces() const {
    return tri_surface_;
  }
  /** Curve id of an edge, or 0 when the edge is not a curve edge. */
  FeatureId edge_curve(int u, int v) const {
    auto it = edge_curve_.find(Edge::edge_key(u, v));
    return it == edge_curve_.end() ? 0 : it->second;
  }
  bool is_crease(int u, int v) const {
    return edge_curve_.count(Edge::edge_key(u, v)) != 0;
  }
  const std::unordered_map<std::uint64_t, FeatureId>& crease_map() const {
    return edge_curve_;
  }
  VertexRole role(int v) const { return role_[v]; }
  const std::vector<VertexRole>& roles() const { return role_; }
  FeatureId point_id(int v) const { return point_id_[v]; }
  /** Neighbours of v across curve edges. */
  const std::vector<int>& crease_neighbors(int v) const {
    return crease_nbrs_[v];
  }

 private:
  std::vector<FeatureId> tri_surface_;
  std::unordered_map<std::uint64_t, FeatureId> edge_curve_;
  std::vector<VertexRole> role_;
  std::vector<FeatureId> point_id_;
  std::vector<std::vector<int>> crease_nbrs_;
};

/** Throws MeshError when the model is inconsistent with the mesh. */
inline void validate_model(const SurfaceMesh& mesh, const FeatureModel& model) {
  ModelIndex(mesh, model);
}

/**
 * Adds the curve and point features implied by the surface partition:
 * interface and boundary edges missing from every curve are chained into
 * new curves, and vertices where the curve graph does not continue
 * (valence other than 2, open ends) become points. New ids continue after
 * the largest existing id.
 */
inline FeatureModel complete_model(const SurfaceMesh& mesh,
                                   FeatureModel model) {
  std::vector<FeatureId> tri_surface(mesh.num_triangles(), 0);
  for (const auto& [id, tris] : model.surfaces)
    for (int t : tris)
      if (t >= 0 && t < mesh.num_triangles()) tri_surface[t] = id;

  std::unordered_map<std::uint64_t, FeatureId> in_curve;
  for (const auto& [id, edges] : model.curves)
    for (const Edge& e : edges) in_curve.emplace(e.key(), id);

  std::vector<int> missing;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& tt = mesh.edge_triangles(e);
    bool interface = tt[1] < 0 || tri_surface[tt[0]] != tri_surface[tt[1]];
    if (interface && !in_curve.count(mesh.edges()[e].key()))
      missing.push_back(e);
  }

  std::vector<char> is_point(mesh.num_vertices(), 0);
  for (const auto& [id, v] : model.points) is_point[v] = 1;

  // Curve-graph valence over existing and missing curve edges.
  std::vector<int> cval(mesh.num_vertices(), 0);
  for (const auto& [key, id] : in_curve) {
    Edge e = Edge::from_key(key);
    ++cval[e.a];
    ++cval[e.b];
  }
  for (int e : missing) {
    ++cval[mesh.edges()[e].a];
    ++cval[mesh.edges()[e].b];
  }

  FeatureId next_point = model.points.empty() ? 1 : model.points.rbegin()->first + 1;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (cval[v] != 0 && cval[v] != 2 && !is_point[v]) {
      is_point[v] = 1;
      model.points[next_point++] = v;
    }
  }

  if (!missing.empty()) {
    // Missing edges also break where they meet an existing curve.
    std::vector<char> brk = is_point;
    for (const auto& [key, id] : in_curve) {
      Edge e = Edge::from_key(key);
      brk[e.a] = 1;
      brk[e.b] = 1;
    }
    FeatureId next_curve =
        model.curves.empty() ? 1 : model.curves.rbegin()->first + 1;
    for (auto& chain : detail::trace_chains(mesh, missing, brk)) {
      for (int v : {chain.front().a, chain.back().b}) {
        if (chain.front().a == chain.back().b && !brk[v]) continue;
        if (!is_point[v]) {
          is_point[v] = 1;
          model.points[next_point++] = v;
        }
      }
      model.curves[next_curve++] = std::move(chain);
    }
  }

  // Open ends of pre-existing curves must be points as well.
  for (const auto& [id, edges] : model.curves) {
    if (edges.front().a == edges.back().b) continue;
    for (int v : {edges.front().a, edges.back().b})
      if (!is_point[v]) {
        is_point[v] = 1;
        model.points[next_point++] = v;
      }
  }
  return model;
}

/**
 * Derives curves and points from per-triangle surface tags. Curves are the
 * maximal chains of edges between differently tagged triangles (or on the
 * boundary); points are the vertices where the curve graph has valence
 * other than 2.
 */
inline FeatureModel infer_features(const SurfaceMesh& mesh,
                                   const std::vector<FeatureId>& tags) {
  if (static_cast<int>(tags.size()) != mesh.num_triangles())
    throw MeshError("infer_features: one tag per triangle required");
  FeatureModel model;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    model.surfaces[tags[t]].push_back(t);

  std::vector<int> interface;
  std::vector<int> cval(mesh.num_vertices(), 0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& tt = mesh.edge_triangles(e);
    if (tt[1] < 0 || tags[tt[0]] != tags[tt[1]]) {
      interface.push_back(e);
      ++cval[mesh.edges()[e].a];
      ++cval[mesh.edges()[e].b];
    }
  }
  std::vector<char> is_point(mesh.num_vertices(), 0);
  FeatureId pid = 1;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (cval[v] != 0 && cval[v] != 2) {
      is_point[v] = 1;
      model.points[pid++] = v;
    }
  }
  FeatureId cid = 1;
  for (auto& chain : detail::trace_chains(mesh, interface, is_point))
    model.curves[cid++] = std::move(chain);
  return model;
}

/** Surface tag per triangle derived from the model (0 where untagged). */
inline std::vector<FeatureId> surface_tags(const SurfaceMesh& mesh,
                                           const FeatureModel& model) {
  std::vector<FeatureId> tags(mesh.num_triangles(), 0);
  for (const auto& [id, tris] : model.surfaces)
    for (int t : tris) tags[t] = id;
  return tags;
}

inline VertexClass classify_vertex(const SurfaceMesh& mesh,
                                   const FeatureModel& model, int v) {
  if (v < 0 || v >= mesh.num_vertices())
    throw MeshError("classify_vertex: vertex " + std::to_string(v) +
                    " out of range");
  VertexClass c;
  c.valence = mesh.valence(v);
  bool on_curve = false;
  for (const auto& [id, p] : model.points)
    if (p == v) c.role = VertexRole::Point;
  if (c.role != VertexRole::Point) {
    for (const auto& [id, edges] : model.curves)
      for (const Edge& e : edges)
        if (e.a == v || e.b == v) on_curve = true;
    if (on_curve) c.role = VertexRole::Curve;
  }
  const int crease_regular = mesh.is_boundary_vertex(v) ? 4 : 6;
  c.regular = (c.role == VertexRole::Surface && c.valence == 6) ||
              (c.role == VertexRole::Curve && c.valence == crease_regular);
  return c;
}

}  // namespace subcurve
