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

#include <numbers>

#include "subcurve/boundary.hpp"
#include "subcurve/subdivision.hpp"

// Synthetic linear meshes for tests, demos and the acceptance suite.

namespace subcurve::meshgen {

struct TaggedSurface {
  SurfaceMesh mesh;
  std::vector<FeatureId> tags;

  FeatureModel model() const { return infer_features(mesh, tags); }
};

struct TaggedVolume {
  VolumeMesh mesh;
  VolumeFeatures features;
};

namespace detail {

/** Builds the mesh, flipping every triangle if the enclosed volume is
 *  negative. */
inline SurfaceMesh closed_outward(std::vector<Vec3> v, std::vector<Tri> t) {
  SurfaceMesh m(v, t);
  if (m.signed_volume() >= 0.0) return m;
  for (auto& tri : t) std::swap(tri[1], tri[2]);
  return SurfaceMesh(std::move(v), std::move(t));
}

}  // namespace detail

/**
 * Planar three-direction grid: (nx+1) x (ny+1) vertices on a sheared
 * lattice with unit edges, so interior vertices have valence 6.
 */
inline SurfaceMesh structured_grid(int nx, int ny, double h = 1.0) {
  std::vector<Vec3> v;
  const double s3 = std::sqrt(3.0) / 2.0;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      v.emplace_back(h * (i + 0.5 * j), h * s3 * j, 0.0);
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Tri> t;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      t.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
      t.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return SurfaceMesh(std::move(v), std::move(t));
}

/** One surface with its four corners as points and the sides as curves. */
inline FeatureModel structured_grid_model(const SurfaceMesh& grid, int nx,
                                          int ny) {
  FeatureModel m = FeatureModel::single_surface(grid.num_triangles());
  const int row = nx + 1;
  m.points = {{1, 0}, {2, nx}, {3, ny * row}, {4, ny * row + nx}};
  return complete_model(grid, std::move(m));
}

/** Torus with the three-direction connectivity: every vertex has valence 6. */
inline SurfaceMesh torus(int n, int m, double R = 1.0, double r = 0.35) {
  std::vector<Vec3> v;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) {
      const double u = 2.0 * std::numbers::pi * i / n;
      const double w = 2.0 * std::numbers::pi * j / m;
      v.emplace_back((R + r * std::cos(w)) * std::cos(u),
                     (R + r * std::cos(w)) * std::sin(u), r * std::sin(w));
    }
  auto id = [&](int i, int j) { return ((j + m) % m) * n + (i + n) % n; };
  std::vector<Tri> t;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) {
      t.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
      t.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return detail::closed_outward(std::move(v), std::move(t));
}

/** Icosahedron refined by midpoint splits and projected to the sphere. */
inline SurfaceMesh icosphere(int levels, double radius = 1.0) {
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0},
                         {0, -1, p}, {0, 1, p}, {0, -1, -p}, {0, 1, -p},
                         {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
  std::vector<Tri> t = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10},
                        {0, 10, 11}, {1, 5, 9}, {5, 11, 4},  {11, 10, 2},
                        {10, 7, 6}, {7, 1, 8},  {3, 9, 4},   {3, 4, 2},
                        {3, 2, 6},  {3, 6, 8},  {3, 8, 9},   {4, 9, 5},
                        {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  SurfaceMesh m(std::move(v), std::move(t));
  for (int l = 0; l < levels; ++l) m = split_midpoint(m);
  std::vector<Vec3> x = m.vertices();
  for (auto& q : x) q = radius * q.normalized();
  return m.with_positions(std::move(x));
}

/** Convex hull of points in general position (every point a hull vertex
 *  for points on a sphere). */
inline SurfaceMesh convex_hull(const std::vector<Vec3>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) throw MeshError("convex_hull: need at least 4 points");
  std::vector<Tri> faces;
  int i3 = -1;
  for (int i = 3; i < n && i3 < 0; ++i)
    if (std::abs(tet_volume(pts[0], pts[1], pts[2], pts[i])) > 1e-12) i3 = i;
  if (i3 < 0) throw MeshError("convex_hull: points are coplanar");
  std::vector<int> order{0, 1, 2, i3};
  for (int i = 3; i < n; ++i)
    if (i != i3) order.push_back(i);
  int a = 0, b = 1, c = 2, d = i3;
  if (tet_volume(pts[a], pts[b], pts[c], pts[d]) < 0) std::swap(b, c);
  // Faces of a positive tet oriented outward.
  faces = {{a, c, b}, {a, b, d}, {a, d, c}, {d, b, c}};
  for (size_t oi = 4; oi < order.size(); ++oi) {
    const Vec3& p = pts[order[oi]];
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (size_t f = 0; f < faces.size(); ++f) {
      const Tri& t = faces[f];
      if (tet_volume(pts[t[0]], pts[t[1]], pts[t[2]], p) > 1e-14) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) continue;
    std::set<std::pair<int, int>> dir;
    for (size_t f = 0; f < faces.size(); ++f)
      if (visible[f])
        for (int k = 0; k < 3; ++k)
          dir.emplace(faces[f][k], faces[f][(k + 1) % 3]);
    std::vector<Tri> next;
    for (size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(faces[f]);
    for (size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      for (int k = 0; k < 3; ++k) {
        int u = faces[f][k], w = faces[f][(k + 1) % 3];
        if (!dir.count({w, u})) next.push_back({u, w, order[oi]});
      }
    }
    faces = std::move(next);
  }
  // Drop interior points and renumber.
  std::vector<int> id(n, -1);
  std::vector<Vec3> v;
  for (auto& t : faces)
    for (int& k : t) {
      if (id[k] < 0) {
        id[k] = static_cast<int>(v.size());
        v.push_back(pts[k]);
      }
      k = id[k];
    }
  return SurfaceMesh(std::move(v), std::move(faces));
}

/** Fibonacci-lattice points on a sphere. */
inline std::vector<Vec3> fibonacci_points(int n, double radius = 1.0) {
  std::vector<Vec3> p;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden * i;
    p.emplace_back(radius * r * std::cos(phi), radius * r * std::sin(phi),
                   radius * z);
  }
  return p;
}

/** Sphere triangulation with n vertices and mixed valences. */
inline SurfaceMesh fibonacci_sphere(int n, double radius = 1.0) {
  return convex_hull(fibonacci_points(n, radius));
}

/**
 * Sphere split into three surfaces: z > 0.3, z < -0.3 and the band between
 * (by triangle centroid). Gives two closed curves with mixed valences.
 */
inline TaggedSurface banded_sphere(int n, double radius = 1.0) {
  TaggedSurface s{fibonacci_sphere(n, radius), {}};
  for (const Tri& t : s.mesh.triangles()) {
    double z = (s.mesh.vertex(t[0]) + s.mesh.vertex(t[1]) +
                s.mesh.vertex(t[2]))[2] / (3.0 * radius);
    s.tags.push_back(z > 0.3 ? 1 : z < -0.3 ? 2 : 3);
  }
  return s;
}

/** Cube surface [0,1]^3 with n x n squares per face, one tag per face. */
inline TaggedSurface cube_surface(int n = 2) {
  std::vector<Vec3> v;
  std::map<std::array<int, 3>, int> index;
  auto vid = [&](int i, int j, int k) {
    auto [it, fresh] = index.emplace(std::array<int, 3>{i, j, k}, int(v.size()));
    if (fresh) v.emplace_back(double(i) / n, double(j) / n, double(k) / n);
    return it->second;
  };
  std::vector<Tri> t;
  TaggedSurface s;
  // Each face: fixed axis, side (0 or n), two running axes.
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      const int u = (axis + 1) % 3, w = (axis + 2) % 3;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          auto at = [&](int da, int db) {
            std::array<int, 3> c{};
            c[axis] = side * n;
            c[u] = a + da;
            c[w] = b + db;
            return vid(c[0], c[1], c[2]);
          };
          Tri t0{at(0, 0), at(1, 0), at(1, 1)};
          Tri t1{at(0, 0), at(1, 1), at(0, 1)};
          // (u, w, axis) is right-handed, so this winding faces +axis.
          if (side == 0) {
            std::swap(t0[1], t0[2]);
            std::swap(t1[1], t1[2]);
          }
          t.push_back(t0);
          t.push_back(t1);
          s.tags.push_back(1 + 2 * axis + side);
          s.tags.push_back(1 + 2 * axis + side);
        }
    }
  s.mesh = SurfaceMesh(std::move(v), std::move(t));
  return s;
}

struct CylinderOptions {
  int around = 24;
  int rows = 6;
  int cap_rings = 3;
  double radius = 1.0;
  double height = 2.0;
  /** Split the top cap along a diameter into two surfaces. */
  bool cap_seam = false;
  /** Split the side into two surfaces along two generators. */
  bool side_seam = false;
};

/**
 * Closed cylinder: bottom cap 1, top cap 2, side 3. The cap seam puts the
 * y < 0 half of the top cap in surface 4; the side seam puts the x < 0 half
 * of the side in surface 5.
 */
inline TaggedSurface cylinder(const CylinderOptions& o = {}) {
  const int n = o.around;
  std::vector<Vec3> v;
  auto ang = [&](int i) { return 2.0 * std::numbers::pi * ((i % n + n) % n) / n; };
  // Side rings k = 0..rows.
  for (int k = 0; k <= o.rows; ++k)
    for (int i = 0; i < n; ++i)
      v.emplace_back(o.radius * std::cos(ang(i)), o.radius * std::sin(ang(i)),
                     o.height * k / o.rows);
  auto side = [&](int i, int k) { return k * n + (i % n + n) % n; };
  std::vector<Tri> t;
  TaggedSurface s;
  auto tag_of = [&](const Tri& tri, FeatureId base) -> FeatureId {
    Vec3 c = (v[tri[0]] + v[tri[1]] + v[tri[2]]) / 3.0;
    if (base == 2 && o.cap_seam && c.y() < 0) return 4;
    if (base == 3 && o.side_seam && c.x() < 0) return 5;
    return base;
  };
  for (int k = 0; k < o.rows; ++k)
    for (int i = 0; i < n; ++i) {
      Tri a{side(i, k), side(i + 1, k), side(i + 1, k + 1)};
      Tri b{side(i, k), side(i + 1, k + 1), side(i, k + 1)};
      for (const Tri& tri : {a, b}) {
        t.push_back(tri);
        s.tags.push_back(tag_of(tri, 3));
      }
    }
  // Caps: inner rings c = 1..cap_rings-1 plus centre; ring cap_rings is the
  // side boundary ring.
  for (int top = 0; top < 2; ++top) {
    const double z = top ? o.height : 0.0;
    const int rim = top ? o.rows : 0;
    const int centre = static_cast<int>(v.size());
    v.emplace_back(0.0, 0.0, z);
    std::vector<int> ring_base(o.cap_rings + 1);
    for (int c = 1; c < o.cap_rings; ++c) {
      ring_base[c] = static_cast<int>(v.size());
      const double r = o.radius * c / o.cap_rings;
      for (int i = 0; i < n; ++i)
        v.emplace_back(r * std::cos(ang(i)), r * std::sin(ang(i)), z);
    }
    auto rv = [&](int c, int i) {
      if (c == o.cap_rings) return side(i, rim);
      return ring_base[c] + (i % n + n) % n;
    };
    auto emit = [&](Tri tri) {
      // Counterclockwise from +z; the bottom cap faces -z.
      if (!top) std::swap(tri[1], tri[2]);
      t.push_back(tri);
      s.tags.push_back(tag_of(tri, top ? 2 : 1));
    };
    for (int i = 0; i < n; ++i) emit({centre, rv(1, i), rv(1, i + 1)});
    for (int c = 1; c < o.cap_rings; ++c)
      for (int i = 0; i < n; ++i) {
        emit({rv(c, i), rv(c + 1, i), rv(c + 1, i + 1)});
        emit({rv(c, i), rv(c + 1, i + 1), rv(c, i + 1)});
      }
  }
  s.mesh = detail::closed_outward(std::move(v), std::move(t));
  return s;
}

/** NACA 4-digit symmetric half thickness at chord fraction x. */
inline double naca_thickness(double x, double t = 0.12) {
  return 5.0 * t *
         (0.2969 * std::sqrt(x) - 0.1260 * x - 0.3516 * x * x +
          0.2843 * x * x * x - 0.1036 * x * x * x * x);
}

struct WingOptions {
  int chord_points = 16;
  int span_rows = 6;
  double span = 1.0;
  double thickness = 0.12;
};

/**
 * Extruded symmetric airfoil along y with a sharp trailing edge and a round
 * leading edge. Surfaces: upper 1, lower 2, root cap 3, tip cap 4. The
 * leading edge is an artificial interface between upper and lower.
 */
inline TaggedSurface wing(const WingOptions& o = {}) {
  // Profile loop in the xz plane: trailing edge, upper side to the leading
  // edge, lower side back. Cosine spacing clusters points at both ends.
  std::vector<Vec3> profile;
  std::vector<int> upper_seg;
  const int m = o.chord_points;
  auto xs = [&](int i) {
    return 0.5 * (1.0 - std::cos(std::numbers::pi * i / m));
  };
  // The closed-trailing-edge variant of the thickness law.
  auto th = [&](double x) {
    double y = naca_thickness(x, o.thickness);
    return y - x * naca_thickness(1.0, o.thickness);
  };
  for (int i = m; i >= 0; --i) profile.emplace_back(xs(i), 0.0, th(xs(i)));
  for (int i = 1; i < m; ++i) profile.emplace_back(xs(i), 0.0, -th(xs(i)));
  const int np = static_cast<int>(profile.size());
  std::vector<Vec3> v;
  for (int j = 0; j <= o.span_rows; ++j)
    for (const auto& p : profile)
      v.emplace_back(p.x(), o.span * j / o.span_rows, p.z());
  auto at = [&](int i, int j) { return j * np + (i % np + np) % np; };
  TaggedSurface s;
  std::vector<Tri> t;
  for (int j = 0; j < o.span_rows; ++j)
    for (int i = 0; i < np; ++i) {
      const FeatureId tag = i < m ? 1 : 2;
      t.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      t.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
      s.tags.push_back(tag);
      s.tags.push_back(tag);
    }
  for (int cap = 0; cap < 2; ++cap) {
    const int j = cap ? o.span_rows : 0;
    const int centre = static_cast<int>(v.size());
    v.emplace_back(0.35, o.span * j / o.span_rows, 0.0);
    for (int i = 0; i < np; ++i) {
      if (cap == 0)
        t.push_back({centre, at(i + 1, j), at(i, j)});
      else
        t.push_back({centre, at(i, j), at(i + 1, j)});
      s.tags.push_back(3 + cap);
    }
  }
  s.mesh = detail::closed_outward(std::move(v), std::move(t));
  return s;
}

/** Positively oriented copy of a tet. */
inline Tet oriented(const std::vector<Vec3>& x, Tet t) {
  if (tet_volume(x[t[0]], x[t[1]], x[t[2]], x[t[3]]) < 0) std::swap(t[2], t[3]);
  return t;
}

/**
 * Box [0,lx] x [0,ly] x [0,lz] split into nx x ny x nz cubes of six Kuhn
 * tets each. Boundary faces are tagged 1..6 for x=0, x=lx, y=0, y=ly, z=0,
 * z=lz.
 */
inline TaggedVolume box_tets(int nx, int ny, int nz, double lx = 1.0,
                             double ly = 1.0, double lz = 1.0) {
  std::vector<Vec3> v;
  auto id = [&](int i, int j, int k) {
    return (k * (ny + 1) + j) * (nx + 1) + i;
  };
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        v.emplace_back(lx * i / nx, ly * j / ny, lz * k / nz);
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                   {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<Tet> tets;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (const auto& p : perms) {
          std::array<int, 3> c{i, j, k};
          Tet t;
          t[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[p[s]];
            t[s + 1] = id(c[0], c[1], c[2]);
          }
          tets.push_back(oriented(v, t));
        }
  TaggedVolume out;
  const double L[3] = {lx, ly, lz};
  for (const Tet& t : tets)
    for (const auto& f : kTetFaces) {
      Tri tri{t[f[0]], t[f[1]], t[f[2]]};
      for (int axis = 0; axis < 3; ++axis)
        for (int side = 0; side < 2; ++side) {
          bool on = true;
          for (int k : tri)
            on = on && std::abs(v[k][axis] - side * L[axis]) < 1e-12;
          if (on) out.features.surfaces[1 + 2 * axis + side].push_back(tri);
        }
    }
  out.mesh = VolumeMesh(std::move(v), std::move(tets));
  return out;
}

/** Unit cube split into five tets (one central, four corners). */
inline VolumeMesh five_tet_cube() {
  std::vector<Vec3> v;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) v.emplace_back(i, j, k);
  auto c = [](int i, int j, int k) { return i + 2 * j + 4 * k; };
  std::vector<Tet> t = {
      {c(0, 0, 0), c(1, 1, 0), c(1, 0, 1), c(0, 1, 1)},
      {c(1, 0, 0), c(0, 0, 0), c(1, 1, 0), c(1, 0, 1)},
      {c(0, 1, 0), c(0, 0, 0), c(1, 1, 0), c(0, 1, 1)},
      {c(0, 0, 1), c(0, 0, 0), c(1, 0, 1), c(0, 1, 1)},
      {c(1, 1, 1), c(1, 1, 0), c(1, 0, 1), c(0, 1, 1)}};
  for (auto& tet : t) tet = oriented(v, tet);
  return VolumeMesh(std::move(v), std::move(t));
}

/** Ball of the given radius: a Kuhn box on [-1,1]^3 mapped radially onto
 *  the sphere, one untagged boundary surface. */
inline TaggedVolume ball_tets(int n, double radius = 1.0) {
  TaggedVolume box = box_tets(n, n, n, 2.0, 2.0, 2.0);
  std::vector<Vec3> x = box.mesh.vertices();
  for (auto& p : x) {
    p -= Vec3::Ones();
    const double inf = p.cwiseAbs().maxCoeff();
    if (inf > 0) p *= radius * inf / p.norm();
  }
  TaggedVolume out;
  out.mesh = VolumeMesh(std::move(x), box.mesh.tets());
  return out;
}

}  // namespace subcurve::meshgen
