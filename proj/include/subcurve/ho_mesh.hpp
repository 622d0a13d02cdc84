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

#include "subcurve/feature_model.hpp"
#include "subcurve/nodes.hpp"

namespace subcurve {

/** Degree-q curve edge of the induced model, nodes from first to last. */
struct HoCurveSegment {
  FeatureId curve = 0;
  std::vector<int> nodes;
};

/** Degree-q boundary face of a volume mesh. */
struct HoFacet {
  FeatureId surface = 0;
  std::vector<int> nodes;
};

/**
 * Nodal mesh of degree q made of triangles (dim 2) or tets (dim 3). Element
 * node lists follow simplex_lattice order. Vertex nodes reuse the linear
 * vertex ids. The induced model lists degree-q curve edges, feature point
 * nodes and, for volumes, the tagged boundary faces.
 */
struct HighOrderMesh {
  int dim = 2;
  int degree = 1;
  NodeKind kind = NodeKind::Equispaced;
  std::vector<Vec3> nodes;
  std::vector<std::vector<int>> elements;
  std::vector<FeatureId> element_tags;
  std::vector<HoCurveSegment> curves;
  std::map<FeatureId, int> points;
  std::vector<HoFacet> facets;

  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_nodes() const { return static_cast<int>(nodes.size()); }

  /** Vertex nodes of element e. */
  std::vector<int> element_vertices(int e) const {
    return {elements[e].begin(), elements[e].begin() + dim + 1};
  }
};

/** Global node numbering for a set of simplices. */
struct HoTopology {
  int dim = 2;
  int degree = 1;
  int num_nodes = 0;
  std::vector<std::vector<int>> elements;
  /** Owning (element, local node) of every global node. */
  std::vector<std::pair<int, int>> owner;
};

/**
 * Numbers the nodes of degree-q simplices. Vertices keep their ids, edge
 * nodes follow (each edge owns q - 1 consecutive ids running from its
 * lower to its higher vertex), then face nodes, then element interiors.
 * Shared entities get identical ids from every incident element.
 */
template <size_t N>
HoTopology build_ho_topology(const std::vector<std::array<int, N>>& simplices,
                             int num_vertices, int q) {
  constexpr int dim = static_cast<int>(N) - 1;
  HoTopology topo;
  topo.dim = dim;
  topo.degree = q;
  const std::vector<Multi> lattice = simplex_lattice(dim, q);
  const int nl = static_cast<int>(lattice.size());
  const int ne = static_cast<int>(simplices.size());
  topo.elements.assign(ne, std::vector<int>(nl, -1));
  topo.owner.assign(num_vertices, {-1, -1});
  int next = num_vertices;

  // Support of each local node: local vertex indices with nonzero index.
  std::vector<std::vector<int>> support(nl);
  for (int i = 0; i < nl; ++i)
    for (int k = 0; k <= dim; ++k)
      if (lattice[i][k] > 0) support[i].push_back(k);

  for (int e = 0; e < ne; ++e)
    for (int i = 0; i < nl; ++i)
      if (support[i].size() == 1) {
        int g = simplices[e][support[i][0]];
        topo.elements[e][i] = g;
        if (topo.owner[g].first < 0) topo.owner[g] = {e, i};
      }

  // Sub-simplex interior lattices indexed by canonical position.
  std::map<std::vector<int>, int> entity_base;
  for (int sdim = 1; sdim <= dim; ++sdim) {
    const int nin = sdim == 1   ? q - 1
                    : sdim == 2 ? (q - 1) * (q - 2) / 2
                                : (q - 1) * (q - 2) * (q - 3) / 6;
    if (nin <= 0) continue;
    // Interior lattice of a degree-q sdim-simplex in canonical order.
    std::vector<Multi> inner;
    for (const Multi& m : simplex_lattice(sdim, q)) {
      bool interior = true;
      for (int k = 0; k <= sdim; ++k) interior = interior && m[k] > 0;
      if (interior) inner.push_back(m);
    }
    std::map<Multi, int> inner_pos;
    for (int i = 0; i < static_cast<int>(inner.size()); ++i)
      inner_pos[inner[i]] = i;

    for (int e = 0; e < ne; ++e) {
      for (int i = 0; i < nl; ++i) {
        if (static_cast<int>(support[i].size()) != sdim + 1) continue;
        // Sort the supporting vertices by global id.
        std::vector<std::pair<int, int>> sv;  // (global, component)
        for (int k : support[i]) sv.emplace_back(simplices[e][k], lattice[i][k]);
        std::sort(sv.begin(), sv.end());
        std::vector<int> key;
        Multi canon{0, 0, 0, 0};
        for (int k = 0; k <= sdim; ++k) {
          key.push_back(sv[k].first);
          canon[k] = sv[k].second;
        }
        auto [it, fresh] = entity_base.emplace(key, next);
        if (fresh) next += nin;
        const int id = it->second + inner_pos.at(canon);
        topo.elements[e][i] = id;
        if (static_cast<int>(topo.owner.size()) <= id)
          topo.owner.resize(id + 1, {-1, -1});
        if (topo.owner[id].first < 0) topo.owner[id] = {e, i};
      }
    }
  }
  topo.num_nodes = next;
  topo.owner.resize(next, {-1, -1});
  return topo;
}

inline HoTopology build_ho_topology(const SurfaceMesh& mesh, int q) {
  return build_ho_topology(mesh.triangles(), mesh.num_vertices(), q);
}

/** Local lattice index of each node of the canonical edge ordering
 *  between local vertices (a, b): entries k = 1..q-1 from a toward b. */
inline std::vector<int> edge_local_nodes(const std::vector<Multi>& lattice,
                                         int dim, int a, int b, int q) {
  std::vector<int> out(q + 1, -1);
  for (int i = 0; i < static_cast<int>(lattice.size()); ++i) {
    const Multi& m = lattice[i];
    bool on = true;
    for (int k = 0; k <= dim; ++k)
      if (k != a && k != b && m[k] != 0) on = false;
    if (on) out[m[b]] = i;
  }
  return out;
}

/**
 * Induced degree-q curve segments: one per curve edge, nodes ordered along
 * the edge's traversal direction.
 */
inline std::vector<HoCurveSegment> induced_curves(
    const SurfaceMesh& mesh, const FeatureModel& model,
    const HoTopology& topo) {
  const int q = topo.degree;
  const std::vector<Multi> lattice = simplex_lattice(2, q);
  std::vector<HoCurveSegment> out;
  for (const auto& [id, edges] : model.curves) {
    for (const Edge& e : edges) {
      int ei = mesh.edge_index(e.a, e.b);
      int t = mesh.edge_triangles(ei)[0];
      const Tri& tri = mesh.triangle(t);
      int la = -1, lb = -1;
      for (int k = 0; k < 3; ++k) {
        if (tri[k] == e.a) la = k;
        if (tri[k] == e.b) lb = k;
      }
      auto loc = edge_local_nodes(lattice, 2, la, lb, q);
      HoCurveSegment seg;
      seg.curve = id;
      for (int k = 0; k <= q; ++k) seg.nodes.push_back(topo.elements[t][loc[k]]);
      out.push_back(std::move(seg));
    }
  }
  return out;
}

/**
 * Splits every element into the linear simplices of its lattice: q^2
 * triangles per triangle, q^3 tets per tet.
 */
inline std::vector<std::vector<int>> lattice_cells(int dim, int q) {
  const std::vector<Multi> lattice = simplex_lattice(dim, q);
  std::map<Multi, int> pos;
  for (int i = 0; i < static_cast<int>(lattice.size()); ++i) pos[lattice[i]] = i;
  std::vector<std::vector<int>> cells;
  if (dim == 2) {
    for (int j = 0; j < q; ++j)
      for (int i = 0; i + j < q; ++i) {
        auto at = [&](int a, int b) { return pos.at({q - a - b, a, b, 0}); };
        cells.push_back({at(i, j), at(i + 1, j), at(i, j + 1)});
        if (i + j + 1 < q)
          cells.push_back({at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
      }
    return cells;
  }
  // Freudenthal cells of the cube lattice inside 0 <= a <= b <= c <= q.
  auto at = [&](int a, int b, int c) {
    return pos.at({q - c, a, b - a, c - b});
  };
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                   {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int x = 0; x < q; ++x)
    for (int y = 0; y < q; ++y)
      for (int z = 0; z < q; ++z)
        for (const auto& p : perms) {
          std::array<std::array<int, 3>, 4> v;
          v[0] = {x, y, z};
          for (int s = 0; s < 3; ++s) {
            v[s + 1] = v[s];
            v[s + 1][p[s]] += 1;
          }
          bool inside = true;
          for (const auto& c : v)
            inside = inside && c[0] <= c[1] && c[1] <= c[2] && c[2] <= q;
          if (!inside) continue;
          std::vector<int> cell;
          for (const auto& c : v) cell.push_back(at(c[0], c[1], c[2]));
          // Orient positively in reference coordinates.
          auto ref = [&](int i) {
            const Multi& m = lattice[i];
            return Vec3(m[1], m[2], m[3]);
          };
          if (tet_volume(ref(cell[0]), ref(cell[1]), ref(cell[2]),
                         ref(cell[3])) < 0)
            std::swap(cell[2], cell[3]);
          cells.push_back(cell);
        }
  return cells;
}

/** Linear surface mesh on the lattices of a triangle HO mesh. */
inline SurfaceMesh refine_to_linear_surface(const HighOrderMesh& ho) {
  if (ho.dim != 2) throw UnsupportedError("expected a triangle mesh");
  std::vector<Tri> tris;
  auto cells = lattice_cells(2, ho.degree);
  for (const auto& el : ho.elements)
    for (const auto& c : cells) tris.push_back({el[c[0]], el[c[1]], el[c[2]]});
  return SurfaceMesh(ho.nodes, std::move(tris));
}

/** Linear tet mesh on the lattices of a tet HO mesh (inverted sub-cells
 *  are reported as errors by VolumeMesh). */
inline VolumeMesh refine_to_linear_volume(const HighOrderMesh& ho) {
  if (ho.dim != 3) throw UnsupportedError("expected a tet mesh");
  std::vector<Tet> tets;
  auto cells = lattice_cells(3, ho.degree);
  for (const auto& el : ho.elements)
    for (const auto& c : cells)
      tets.push_back({el[c[0]], el[c[1]], el[c[2]], el[c[3]]});
  return VolumeMesh(ho.nodes, std::move(tets));
}

/** Isoparametric map of one element at barycentric point lam. */
inline Vec3 eval_element(const HighOrderMesh& ho, const NodalBasis& basis,
                         int e, const double* lam) {
  std::vector<double> phi(basis.size());
  basis.values(lam, phi.data());
  Vec3 x = Vec3::Zero();
  for (int j = 0; j < basis.size(); ++j) x += phi[j] * ho.nodes[ho.elements[e][j]];
  return x;
}

/** Jacobian columns d x / d r_i of element e at lam. */
inline Eigen::Matrix<double, 3, Eigen::Dynamic> element_jacobian(
    const HighOrderMesh& ho, const NodalBasis& basis, int e,
    const double* lam) {
  const int n = basis.size(), d = basis.dim();
  std::vector<double> grad(size_t(n) * d);
  basis.gradients(lam, nullptr, grad.data());
  Eigen::Matrix<double, 3, Eigen::Dynamic> J =
      Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, d);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < d; ++k) J.col(k) += grad[j * d + k] * ho.nodes[ho.elements[e][j]];
  return J;
}

}  // namespace subcurve
