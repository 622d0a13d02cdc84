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

#include "subcurve/io/gmsh.hpp"

namespace subcurve {

// VTK XML unstructured grid, ASCII, with Lagrange cells.

inline constexpr int kVtkTriangle = 5;
inline constexpr int kVtkTetra = 10;
inline constexpr int kVtkLagrangeTriangle = 69;
inline constexpr int kVtkLagrangeTetrahedron = 71;

namespace detail {

inline constexpr std::array<std::array<int, 2>, 6> kVtkTetEdges = {
    {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}, {2, 3}}};
inline constexpr std::array<std::array<int, 3>, 4> kVtkTetFaces = {
    {{0, 1, 3}, {2, 3, 1}, {0, 3, 2}, {0, 2, 1}}};

inline void vtk_tet_rec(int n, int off, std::vector<Multi>& out) {
  if (n < 0) return;
  if (n == 0) {
    out.push_back({off, off, off, off});
    return;
  }
  for (int i = 0; i < 4; ++i) {
    Multi m{off, off, off, off};
    m[i] += n;
    out.push_back(m);
  }
  for (const auto& e : kVtkTetEdges)
    for (int k = 1; k < n; ++k) {
      Multi m{off, off, off, off};
      m[e[0]] += n - k;
      m[e[1]] += k;
      out.push_back(m);
    }
  std::vector<Multi> face;
  triangle_lattice_rec(n - 3, 1, face);
  for (const auto& f : kVtkTetFaces)
    for (const Multi& b : face) {
      Multi m{off, off, off, off};
      for (int k = 0; k < 3; ++k) m[f[k]] += b[k];
      out.push_back(m);
    }
  vtk_tet_rec(n - 4, off + 1, out);
}

}  // namespace detail

/** Local node (simplex_lattice index) at each VTK Lagrange cell position. */
inline std::vector<int> vtk_node_order(int dim, int q) {
  const std::vector<Multi> ours = simplex_lattice(dim, q);
  if (dim != 3) {
    std::vector<int> id(ours.size());
    for (size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
    return id;
  }
  std::map<Multi, int> index;
  for (int i = 0; i < static_cast<int>(ours.size()); ++i) index[ours[i]] = i;
  std::vector<Multi> vtk;
  detail::vtk_tet_rec(q, 0, vtk);
  std::vector<int> out;
  for (const Multi& m : vtk) out.push_back(index.at(m));
  return out;
}

inline int vtk_cell_type(int dim, int q) {
  if (dim == 2) return q == 1 ? kVtkTriangle : kVtkLagrangeTriangle;
  if (dim == 3) return q == 1 ? kVtkTetra : kVtkLagrangeTetrahedron;
  throw UnsupportedError("VTU cells must be triangles or tetrahedra");
}

/**
 * Writes the elements of a degree-q mesh as VTK Lagrange cells with an
 * "element_tag" cell field, the given element fields as cell data and the
 * node fields as point data.
 */
inline void write_vtu(const HighOrderMesh& ho, const std::string& path,
                      const MeshFields& fields = {}) {
  const int type = vtk_cell_type(ho.dim, ho.degree);
  const std::vector<int> order = vtk_node_order(ho.dim, ho.degree);
  for (const ScalarField& f : fields.element)
    if (static_cast<int>(f.values.size()) != ho.num_elements())
      throw IoError("element field '" + f.name + "' has the wrong size");
  for (const ScalarField& f : fields.node)
    if (static_cast<int>(f.values.size()) != ho.num_nodes())
      throw IoError("node field '" + f.name + "' has the wrong size");

  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os.precision(17);
  auto array = [&](const char* type_name, const std::string& name, int comps,
                   auto&& body) {
    os << "<DataArray type=\"" << type_name << "\" Name=\"" << name << '"';
    if (comps > 1) os << " NumberOfComponents=\"" << comps << '"';
    os << " format=\"ascii\">\n";
    body();
    os << "</DataArray>\n";
  };
  auto scalars = [&](const ScalarField& f) {
    array("Float64", f.name, 1, [&] {
      for (double v : f.values) os << v << '\n';
    });
  };

  os << "<?xml version=\"1.0\"?>\n"
     << "<VTKFile type=\"UnstructuredGrid\" version=\"1.0\" "
        "byte_order=\"LittleEndian\" header_type=\"UInt64\">\n"
     << "<UnstructuredGrid>\n"
     << "<Piece NumberOfPoints=\"" << ho.num_nodes() << "\" NumberOfCells=\""
     << ho.num_elements() << "\">\n";
  os << "<PointData>\n";
  for (const ScalarField& f : fields.node) scalars(f);
  os << "</PointData>\n<CellData>\n";
  array("Int64", "element_tag", 1, [&] {
    for (FeatureId t : ho.element_tags) os << t << '\n';
  });
  for (const ScalarField& f : fields.element) scalars(f);
  os << "</CellData>\n<Points>\n";
  array("Float64", "Points", 3, [&] {
    for (const Vec3& x : ho.nodes) os << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
  });
  os << "</Points>\n<Cells>\n";
  array("Int64", "connectivity", 1, [&] {
    for (const auto& el : ho.elements) {
      for (size_t i = 0; i < order.size(); ++i)
        os << el[order[i]] << (i + 1 < order.size() ? ' ' : '\n');
    }
  });
  array("Int64", "offsets", 1, [&] {
    for (int e = 1; e <= ho.num_elements(); ++e)
      os << static_cast<long>(e) * static_cast<long>(order.size()) << '\n';
  });
  array("UInt8", "types", 1, [&] {
    for (int e = 0; e < ho.num_elements(); ++e) os << type << '\n';
  });
  os << "</Cells>\n</Piece>\n</UnstructuredGrid>\n</VTKFile>\n";
  if (!os) throw IoError("failed writing " + path);
}

}  // namespace subcurve
