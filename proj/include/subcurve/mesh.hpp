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

#include <span>
#include <unordered_map>

#include "subcurve/geometry.hpp"

namespace subcurve {

/**
 * Oriented manifold triangle mesh with edge and one-ring adjacency.
 * Immutable after construction.
 */
class SurfaceMesh {
 public:
  SurfaceMesh() = default;

  /** Builds adjacency and validates the manifold invariants.
   *  Throws MeshError naming the offending entity. */
  SurfaceMesh(std::vector<Vec3> vertices, std::vector<Tri> triangles)
      : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    Build();
  }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Tri>& triangles() const { return triangles_; }
  const Vec3& vertex(int v) const { return vertices_[v]; }
  const Tri& triangle(int t) const { return triangles_[t]; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }

  /** Undirected edges with lo < hi, in order of first appearance. */
  const std::vector<Edge>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /** Index into edges(), or -1. */
  int edge_index(int u, int v) const {
    auto it = edge_index_.find(Edge::edge_key(u, v));
    return it == edge_index_.end() ? -1 : it->second;
  }

  /** The one or two triangles on an edge; the second slot is -1 on the
   *  boundary. */
  const std::array<int, 2>& edge_triangles(int e) const {
    return edge_tris_[e];
  }
  bool is_boundary_edge(int e) const { return edge_tris_[e][1] < 0; }

  /** Neighbours of v in counterclockwise order. For a boundary vertex the
   *  fan is open and the ring has one more entry than the fan. */
  std::span<const int> one_ring(int v) const {
    return {ring_.data() + ring_off_[v],
            static_cast<size_t>(ring_off_[v + 1] - ring_off_[v])};
  }
  /** Incident triangles in counterclockwise order. */
  std::span<const int> vertex_triangles(int v) const {
    return {fan_.data() + fan_off_[v],
            static_cast<size_t>(fan_off_[v + 1] - fan_off_[v])};
  }
  int valence(int v) const { return ring_off_[v + 1] - ring_off_[v]; }
  bool is_boundary_vertex(int v) const { return boundary_[v] != 0; }

  /** Vertex of triangle t opposite to edge (u, v), or -1. */
  int opposite(int t, int u, int v) const {
    for (int k : triangles_[t])
      if (k != u && k != v) return k;
    return -1;
  }

  /** Same connectivity with new coordinates. */
  SurfaceMesh with_positions(std::vector<Vec3> positions) const {
    if (positions.size() != vertices_.size())
      throw MeshError("with_positions: vertex count mismatch");
    SurfaceMesh m = *this;
    m.vertices_ = std::move(positions);
    return m;
  }

  double signed_volume() const {
    double vol = 0.0;
    for (const auto& t : triangles_)
      vol += vertices_[t[0]].dot(vertices_[t[1]].cross(vertices_[t[2]]));
    return vol / 6.0;
  }

 private:
  void Build() {
    const int nv = num_vertices();
    const int nt = num_triangles();
    edge_index_.reserve(size_t(nt) * 2);
    std::vector<std::vector<int>> incident(nv);
    for (int t = 0; t < nt; ++t) {
      const Tri& tri = triangles_[t];
      for (int k = 0; k < 3; ++k) {
        if (tri[k] < 0 || tri[k] >= nv)
          throw MeshError("triangle " + std::to_string(t) +
                          " references missing vertex " +
                          std::to_string(tri[k]));
      }
      if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
        throw MeshError("degenerate triangle " + std::to_string(t));
      for (int k = 0; k < 3; ++k) {
        int u = tri[k], v = tri[(k + 1) % 3];
        auto [it, fresh] =
            edge_index_.emplace(Edge::edge_key(u, v), int(edges_.size()));
        if (fresh) {
          edges_.push_back(Edge(u, v).canonical());
          edge_tris_.push_back({t, -1});
          edge_dir_.push_back(u < v ? 1 : -1);
          continue;
        }
        int e = it->second;
        auto& slot = edge_tris_[e];
        if (slot[1] >= 0)
          throw MeshError("non-manifold edge " + edge_str(edges_[e]) +
                          " shared by more than two triangles (" +
                          std::to_string(slot[0]) + ", " +
                          std::to_string(slot[1]) + ", " +
                          std::to_string(t) + ")");
        int dir = u < v ? 1 : -1;
        if (dir == edge_dir_[e])
          throw MeshError("inconsistent orientation at edge " +
                          edge_str(edges_[e]) + " between triangles " +
                          std::to_string(slot[0]) + " and " +
                          std::to_string(t));
        slot[1] = t;
      }
      for (int k : tri) incident[k].push_back(t);
    }

    ring_off_.assign(nv + 1, 0);
    fan_off_.assign(nv + 1, 0);
    boundary_.assign(nv, 0);
    std::vector<std::pair<int, int>> arcs;  // (a, b) per triangle (v, a, b)
    for (int v = 0; v < nv; ++v) {
      arcs.clear();
      for (int t : incident[v]) {
        const Tri& tri = triangles_[t];
        int k = tri[0] == v ? 0 : tri[1] == v ? 1 : 2;
        arcs.emplace_back(tri[(k + 1) % 3], tri[(k + 2) % 3]);
      }
      const int n = static_cast<int>(arcs.size());
      fan_off_[v + 1] = fan_off_[v];
      ring_off_[v + 1] = ring_off_[v];
      if (n == 0) continue;
      // An arc whose start is no other arc's end opens a boundary fan.
      int start = 0;
      bool open = false;
      for (int i = 0; i < n; ++i) {
        bool has_pred = false;
        for (int j = 0; j < n; ++j)
          if (arcs[j].second == arcs[i].first) has_pred = true;
        if (!has_pred) {
          if (open)
            throw MeshError("non-manifold vertex " + std::to_string(v));
          start = i;
          open = true;
        }
      }
      int cur = start;
      std::vector<char> used(n, 0);
      for (int step = 0; step < n; ++step) {
        used[cur] = 1;
        fan_.push_back(incident[v][cur]);
        ring_.push_back(arcs[cur].first);
        int next = -1;
        for (int j = 0; j < n; ++j)
          if (!used[j] && arcs[j].first == arcs[cur].second) next = j;
        if (next < 0) {
          if (step != n - 1)
            throw MeshError("non-manifold vertex " + std::to_string(v));
          break;
        }
        cur = next;
      }
      if (open) ring_.push_back(arcs[cur].second);
      boundary_[v] = open ? 1 : 0;
      fan_off_[v + 1] = static_cast<int>(fan_.size());
      ring_off_[v + 1] = static_cast<int>(ring_.size());
    }
  }

  std::vector<Vec3> vertices_;
  std::vector<Tri> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 2>> edge_tris_;
  std::vector<int> edge_dir_;
  std::unordered_map<std::uint64_t, int> edge_index_;
  std::vector<int> ring_off_, ring_;
  std::vector<int> fan_off_, fan_;
  std::vector<char> boundary_;
};

/** Linear tetrahedral mesh. Every tet must have positive signed volume. */
class VolumeMesh {
 public:
  VolumeMesh() = default;
  VolumeMesh(std::vector<Vec3> vertices, std::vector<Tet> tets)
      : vertices_(std::move(vertices)), tets_(std::move(tets)) {
    const int nv = num_vertices();
    for (int t = 0; t < num_tets(); ++t) {
      for (int v : tets_[t])
        if (v < 0 || v >= nv)
          throw MeshError("tet " + std::to_string(t) +
                          " references missing vertex " + std::to_string(v));
      const Tet& k = tets_[t];
      if (!(tet_volume(vertices_[k[0]], vertices_[k[1]], vertices_[k[2]],
                       vertices_[k[3]]) > 0.0))
        throw MeshError("tet " + std::to_string(t) +
                        " has non-positive signed volume");
    }
  }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Tet>& tets() const { return tets_; }
  const Vec3& vertex(int v) const { return vertices_[v]; }
  const Tet& tet(int t) const { return tets_[t]; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_tets() const { return static_cast<int>(tets_.size()); }

 private:
  std::vector<Vec3> vertices_;
  std::vector<Tet> tets_;
};

/** Local vertex triples of the four tet faces, each oriented outward for a
 *  positively oriented tet. Face f is opposite vertex 3 - f. */
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces = {
    {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {3, 1, 2}}};

/** Local vertex pairs of the six tet edges. */
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {1, 2}, {2, 0}, {3, 0}, {3, 2}, {3, 1}}};

}  // namespace subcurve
