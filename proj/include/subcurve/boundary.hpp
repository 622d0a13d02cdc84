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

#include "subcurve/feature_model.hpp"

namespace subcurve {

/**
 * Feature tags of a volume mesh in volume vertex numbering. Surfaces list
 * boundary faces by their vertices (any orientation).
 */
struct VolumeFeatures {
  std::map<FeatureId, int> points;
  std::map<FeatureId, std::vector<Edge>> curves;
  std::map<FeatureId, std::vector<Tri>> surfaces;
};

struct BoundaryExtraction {
  SurfaceMesh surface;
  FeatureModel model;
  /** Volume vertex of each surface vertex. */
  std::vector<int> to_volume;
  /** (tet, local face) of each surface triangle; faces as in kTetFaces. */
  std::vector<std::pair<int, int>> face_of;
};

namespace detail {
inline std::array<int, 3> sorted3(int a, int b, int c) {
  std::array<int, 3> s{a, b, c};
  std::sort(s.begin(), s.end());
  return s;
}
}  // namespace detail

/**
 * Faces incident to exactly one tet, oriented outward and renumbered
 * compactly. Tagged features are carried over; untagged boundary faces go
 * to one extra surface, and missing curves and points are completed.
 */
inline BoundaryExtraction extract_boundary(const VolumeMesh& mesh,
                                           const VolumeFeatures& features = {}) {
  std::map<std::array<int, 3>, std::pair<int, int>> faces;
  std::map<std::array<int, 3>, int> count;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const Tet& k = mesh.tet(t);
    for (int f = 0; f < 4; ++f) {
      const auto& lf = kTetFaces[f];
      auto key = detail::sorted3(k[lf[0]], k[lf[1]], k[lf[2]]);
      if (++count[key] == 1) faces[key] = {t, f};
      else if (count[key] > 2)
        throw MeshError("face shared by more than two tets");
    }
  }
  BoundaryExtraction out;
  std::vector<int> to_surface(mesh.num_vertices(), -1);
  std::vector<Tri> tris;
  std::vector<Vec3> verts;
  // Walk tets in order so the numbering does not depend on map ordering.
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const Tet& k = mesh.tet(t);
    for (int f = 0; f < 4; ++f) {
      const auto& lf = kTetFaces[f];
      auto key = detail::sorted3(k[lf[0]], k[lf[1]], k[lf[2]]);
      if (count[key] != 1) continue;
      Tri tri;
      for (int i = 0; i < 3; ++i) {
        int g = k[lf[i]];
        if (to_surface[g] < 0) {
          to_surface[g] = static_cast<int>(verts.size());
          verts.push_back(mesh.vertex(g));
          out.to_volume.push_back(g);
        }
        tri[i] = to_surface[g];
      }
      tris.push_back(tri);
      out.face_of.emplace_back(t, f);
    }
  }
  out.surface = SurfaceMesh(std::move(verts), std::move(tris));

  std::map<std::array<int, 3>, FeatureId> face_tag;
  FeatureId max_surface = 0;
  for (const auto& [id, list] : features.surfaces) {
    max_surface = std::max(max_surface, id);
    for (const Tri& f : list) {
      auto key = detail::sorted3(f[0], f[1], f[2]);
      if (!count.count(key) || count[key] != 1)
        throw MeshError("tagged face (" + std::to_string(f[0]) + "," +
                        std::to_string(f[1]) + "," + std::to_string(f[2]) +
                        ") of surface " + std::to_string(id) +
                        " is not a boundary face");
      face_tag[key] = id;
    }
  }
  FeatureModel model;
  for (int t = 0; t < out.surface.num_triangles(); ++t) {
    const Tri& s = out.surface.triangle(t);
    auto key = detail::sorted3(out.to_volume[s[0]], out.to_volume[s[1]],
                               out.to_volume[s[2]]);
    auto it = face_tag.find(key);
    model.surfaces[it == face_tag.end() ? max_surface + 1 : it->second]
        .push_back(t);
  }
  for (const auto& [id, v] : features.points) {
    if (v < 0 || v >= mesh.num_vertices() || to_surface[v] < 0)
      throw MeshError("point " + std::to_string(id) +
                      " is not a boundary vertex");
    model.points[id] = to_surface[v];
  }
  for (const auto& [id, edges] : features.curves) {
    auto& dst = model.curves[id];
    for (const Edge& e : edges) {
      int a = e.a >= 0 && e.a < mesh.num_vertices() ? to_surface[e.a] : -1;
      int b = e.b >= 0 && e.b < mesh.num_vertices() ? to_surface[e.b] : -1;
      if (a < 0 || b < 0 || out.surface.edge_index(a, b) < 0)
        throw MeshError("curve " + std::to_string(id) + " edge " +
                        edge_str(e) + " is not a boundary edge");
      dst.emplace_back(a, b);
    }
  }
  out.model = complete_model(out.surface, std::move(model));
  validate_model(out.surface, out.model);
  return out;
}

}  // namespace subcurve
