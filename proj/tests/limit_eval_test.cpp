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

#include <gtest/gtest.h>

#include <random>

#include "subcurve/meshgen.hpp"
#include "subcurve/limit_eval.hpp"
#include "test_oracles.hpp"

namespace subcurve {
namespace {

// Stencil of a triangle (c, r0, r1) with centre valence k: the one-ring of
// c on a regular k-gon and the outer points a, b, d, e, f on the planar
// lattice around r0 and r1.
SurfacePatchStencil PlanarStencil(int k) {
  SurfacePatchStencil s;
  s.valence = k;
  s.points.push_back({0, 0, 0});
  for (int i = 0; i < k; ++i) {
    double a = 2.0 * std::numbers::pi * i / k;
    s.points.emplace_back(std::cos(a), std::sin(a), 0.0);
  }
  const Vec3 r0 = s.points[1], r1 = s.points[2];
  const Vec3 A = r0, B = r1;
  for (const Vec3& p : std::array<Vec3, 5>{r0 + A - B, r0 + A, r0 + B,
                                            r1 + B, r1 + B - A})
    s.points.push_back(p);
  return s;
}

TEST(CurveSegment, LinearPrecisionAndPartition) {
  CurveStencil s{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)}};
  for (double u : {0.0, 0.1, 0.5, 0.9, 1.0})
    EXPECT_NEAR((eval_curve_segment(s, u) - Vec3(1 + u, 0, 0)).norm(), 0.0,
                1e-15);
  Vec3 p(0.2, 3.0, -1.0);
  CurveStencil c{{p, p, p, p}};
  EXPECT_NEAR((eval_curve_segment(c, 0.37) - p).norm(), 0.0, 1e-15);
}

TEST(CurveSegment, EndpointIsLimitPosition) {
  CurveStencil s{{Vec3(0, 1, 0), Vec3(1, 3, 0), Vec3(2, 0, 1), Vec3(4, 4, 4)}};
  EXPECT_NEAR((eval_curve_segment(s, 0.0) -
               limit_position_curve(s.points[0], s.points[1], s.points[2]))
                  .norm(),
              0.0, 1e-15);
  EXPECT_NEAR((eval_curve_segment(s, 1.0) -
               limit_position_curve(s.points[1], s.points[2], s.points[3]))
                  .norm(),
              0.0, 1e-15);
}

TEST(BoxSpline, PartitionOfUnityAndLinearPrecision) {
  // Lattice coordinates of points 1..12 relative to corner 8.
  const int lat[12][2] = {{2, 0},  {2, -1}, {1, 1},  {1, 0},
                          {1, -1}, {0, 2},  {0, 1},  {0, 0},
                          {0, -1}, {-1, 2}, {-1, 1}, {-1, 0}};
  for (double u : {0.0, 0.2, 0.5, 1.0})
    for (double v : {0.0, 0.3, 0.5})
      if (u + v <= 1.0) {
        auto n = box_spline_basis(u, v);
        double s = 0, su = 0, sv = 0;
        for (int i = 0; i < 12; ++i) {
          s += n[i];
          su += n[i] * lat[i][0];
          sv += n[i] * lat[i][1];
        }
        EXPECT_NEAR(s, 1.0, 1e-15);
        EXPECT_NEAR(su, u, 1e-15);
        EXPECT_NEAR(sv, v, 1e-15);
      }
}

TEST(SurfacePatch, PlanarRegularStencil) {
  SurfacePatchStencil s = PlanarStencil(6);
  for (const Bary3& xi : {Bary3{1, 0, 0}, Bary3{0.2, 0.3, 0.5},
                          Bary3{1.0 / 3, 1.0 / 3, 1.0 / 3}}) {
    Vec3 expect = bary_point(s.points[0], s.points[1], s.points[2], xi);
    LimitSample r = eval_surface_patch(s, xi);
    EXPECT_NEAR((r.point - expect).norm(), 0.0, 1e-14);
    EXPECT_EQ(r.subdivisions, 0);
  }
}

TEST(SurfacePatch, RegularCornerIsLimitMask) {
  // At corner 8 the basis is 1/2 there and 1/12 on its lattice neighbours
  // 4, 5, 7, 9, 11 and 12.
  auto n = box_spline_basis(0.0, 0.0);
  EXPECT_NEAR(n[7], 0.5, 1e-16);
  for (int i : {3, 4, 6, 8, 10, 11}) EXPECT_NEAR(n[i], 1.0 / 12.0, 1e-16);
  for (int i : {0, 1, 2, 5, 9}) EXPECT_EQ(n[i], 0.0);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  SurfacePatchStencil s = PlanarStencil(6);
  for (auto& p : s.points) p += Vec3(u(rng), u(rng), u(rng));
  std::vector<Vec3> ring(s.points.begin() + 1, s.points.begin() + 7);
  // Just off the corner the box spline branch is taken.
  Bary3 xi{1.0 - 2e-16, 1e-16, 1e-16};
  LimitSample r = eval_surface_patch(s, xi);
  EXPECT_EQ(r.subdivisions, 0);
  EXPECT_TRUE(r.has_derivatives);
  EXPECT_NEAR((r.point - limit_position_surface(s.points[0], ring)).norm(),
              0.0, 1e-12);
}

TEST(SurfacePatch, ConstantStencil) {
  for (int k : {3, 5, 6, 7}) {
    SurfacePatchStencil s;
    s.valence = k;
    s.points.assign(k + 6, Vec3(0.5, -1.0, 2.0));
    EXPECT_NEAR((eval_surface_patch(s, {0.3, 0.3, 0.4}).point -
                 Vec3(0.5, -1.0, 2.0)).norm(), 0.0, 1e-14);
  }
}

TEST(SurfacePatch, IrregularCornerUsesLimitMask) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  SurfacePatchStencil s = PlanarStencil(5);
  for (auto& p : s.points) p.z() += u(rng);
  std::vector<Vec3> ring(s.points.begin() + 1, s.points.begin() + 6);
  LimitSample r = eval_surface_patch(s, {1.0, 0.0, 0.0});
  EXPECT_NEAR((r.point - limit_position_surface(s.points[0], ring)).norm(), 0.0,
              1e-15);
  LimitSample near = eval_surface_patch(s, {1.0 - 3e-6, 2e-6, 1e-6});
  EXPECT_GT(near.subdivisions, 10);
  EXPECT_NEAR((near.point - r.point).norm(), 0.0, 1e-4);
  EXPECT_FALSE(near.fallback);
  LimitSample capped = eval_surface_patch(s, {1.0 - 3e-6, 2e-6, 1e-6}, 4);
  EXPECT_TRUE(capped.fallback);
}

TEST(SurfacePatch, RejectsWrongSize) {
  SurfacePatchStencil s;
  s.valence = 6;
  s.points.resize(11);
  EXPECT_THROW(eval_surface_patch(s, {1, 0, 0}), MeshError);
}

TEST(SelectChild, RemapPreservesLinearPosition) {
  const Vec3 A(0, 0, 0), B(1, 0, 0), C(0.3, 0.9, 0);
  const Vec3 mid[3] = {0.5 * (A + B), 0.5 * (B + C), 0.5 * (C + A)};
  // Children: (A,m01,m20), (m01,B,m12), (m20,m12,C), (m12,m20,m01).
  const std::array<std::array<Vec3, 3>, 4> child = {{{A, mid[0], mid[2]},
                                                     {mid[0], B, mid[1]},
                                                     {mid[2], mid[1], C},
                                                     {mid[1], mid[2], mid[0]}}};
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = u(rng) * (1 - a);
    Bary3 xi{a, b, 1 - a - b}, out;
    int c = detail::select_child(xi, out);
    for (double x : out) EXPECT_GE(x, -1e-15);
    EXPECT_NEAR((bary_point(A, B, C, xi) -
                 bary_point(child[c][0], child[c][1], child[c][2], out)).norm(),
                0.0, 1e-15);
  }
}

class EvaluatorTest : public ::testing::Test {
 protected:
  static LimitEvaluator Make(const meshgen::TaggedSurface& s) {
    FeatureModel m = s.model();
    return LimitEvaluator(compute_control_mesh(s.mesh, m).mesh, m);
  }
};

TEST_F(EvaluatorTest, FeaturePointIsInputVertex) {
  meshgen::TaggedSurface cube = meshgen::cube_surface(2);
  LimitEvaluator ev = Make(cube);
  for (int t = 0; t < cube.mesh.num_triangles(); ++t)
    for (int k = 0; k < 3; ++k) {
      int v = cube.mesh.triangle(t)[k];
      if (ev.index().role(v) != VertexRole::Point) continue;
      Bary3 xi{0, 0, 0};
      xi[k] = 1.0;
      EXPECT_EQ(ev.map_onto_limit(t, xi).point, cube.mesh.vertex(v));
    }
}

TEST_F(EvaluatorTest, CurveEdgeMatchesSegment) {
  meshgen::TaggedSurface cyl = meshgen::cylinder();
  LimitEvaluator ev = Make(cyl);
  int checked = 0;
  for (int t = 0; t < cyl.mesh.num_triangles(); ++t) {
    const Tri& tri = cyl.mesh.triangle(t);
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      if (!ev.index().is_crease(a, b)) continue;
      Bary3 xi{0, 0, 0};
      xi[k] = 0.5;
      xi[(k + 1) % 3] = 0.5;
      Vec3 direct = eval_curve_segment(ev.curve_stencil(a, b), 0.5);
      EXPECT_NEAR((ev.map_onto_limit(t, xi).point - direct).norm(), 0.0, 1e-15);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 2 * 2 * 24);
}

TEST_F(EvaluatorTest, PlanarPatchIsFlat) {
  SurfaceMesh g = meshgen::structured_grid(6, 6);
  FeatureModel m = meshgen::structured_grid_model(g, 6, 6);
  LimitEvaluator ev(compute_control_mesh(g, m).mesh, m);
  for (int t = 0; t < g.num_triangles(); ++t) {
    const Tri& tri = g.triangle(t);
    for (const Bary3& xi : {Bary3{1.0 / 3, 1.0 / 3, 1.0 / 3},
                            Bary3{0.1, 0.6, 0.3}, Bary3{0.5, 0.5, 0.0}}) {
      Vec3 expect = bary_point(g.vertex(tri[0]), g.vertex(tri[1]),
                               g.vertex(tri[2]), xi);
      EXPECT_NEAR((ev.map_onto_limit(t, xi).point - expect).norm(), 0.0,
                  1e-13);
    }
  }
}

TEST_F(EvaluatorTest, InteriorRegularTriangleNeedsNoSubdivision) {
  SurfaceMesh g = meshgen::torus(12, 9);
  FeatureModel m = FeatureModel::single_surface(g.num_triangles());
  LimitEvaluator ev(g, m);
  LimitSample s = ev.map_onto_limit(5, {0.2, 0.3, 0.5});
  EXPECT_EQ(s.subdivisions, 0);
  EXPECT_TRUE(s.has_derivatives);
}

TEST_F(EvaluatorTest, CurveNextToPointSubdividesOnce) {
  meshgen::TaggedSurface cube = meshgen::cube_surface(3);
  FeatureModel m = cube.model();
  LimitEvaluator ev(cube.mesh, m);
  // Each cube edge has three segments; the first starts at a corner.
  const FeatureId id = m.curves.begin()->first;
  LimitSample s = ev.map_onto_limit_curve(id, 0, 0.6);
  EXPECT_EQ(s.subdivisions, 1);
  // The middle segment has corners only at the ends of its stencil.
  LimitSample inner = ev.map_onto_limit_curve(id, 1, 0.6);
  EXPECT_EQ(inner.subdivisions, 0);
}

TEST(CurveLimit, InnerSegmentZeroSubdivisions) {
  meshgen::TaggedSurface cyl = meshgen::cylinder();
  FeatureModel m = cyl.model();
  LimitEvaluator ev(cyl.mesh, m);
  EXPECT_EQ(ev.map_onto_limit_curve(m.curves.begin()->first, 3, 0.3)
                .subdivisions,
            0);
}

TEST(CurveLimit, RemapAfterOneSubdivision) {
  // Segment with a feature start point: t = 0.6 lands in the inner child at
  // t' = 0.2, whose stencil has no feature point.
  detail::CurveLocal c;
  c.x = {Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(1, 0.3, 0), Vec3(2, 0.1, 0)};
  c.role = {VertexRole::Point, VertexRole::Point, VertexRole::Curve,
            VertexRole::Curve};
  LimitSample s = detail::eval_curve_local(c, 0.6, 48);
  EXPECT_EQ(s.subdivisions, 1);
  const Vec3 m = 0.5 * (c.x[1] + c.x[2]);
  const Vec3 b = (c.x[1] + 6.0 * c.x[2] + c.x[3]) / 8.0;
  CurveStencil child{{c.x[1], m, b, 0.5 * (c.x[2] + c.x[3])}};
  EXPECT_NEAR((s.point - eval_curve_segment(child, 0.2)).norm(), 0.0, 1e-15);
}

TEST(CurveLimit, StraightPolylineMatchesGlobalSubdivision) {
  // Nonuniform straight polyline between two fixed ends.
  std::vector<double> xs{0.0, 0.3, 1.1, 1.5, 2.6, 3.0};
  std::vector<Vec3> pts;
  for (double x : xs) pts.emplace_back(x, 2.0 * x, -x);
  const int levels = 8;
  for (int seg = 0; seg + 1 < static_cast<int>(pts.size()); ++seg) {
    for (int k = 1; k < 8; ++k) {
      const double t = k / 8.0;
      Vec3 expect = oracle::curve_dyadic_limit(pts, seg, t, levels);
      detail::CurveLocal c;
      const int n = static_cast<int>(pts.size());
      auto role = [&](int i) {
        return i == 0 || i == n - 1 ? VertexRole::Point : VertexRole::Curve;
      };
      const int p = std::max(seg - 1, 0), q = std::min(seg + 2, n - 1);
      c.x = {pts[p], pts[seg], pts[seg + 1], pts[q]};
      c.role = {role(p), role(seg), role(seg + 1), role(q)};
      LimitSample s = detail::eval_curve_local(c, t, 48);
      EXPECT_NEAR((s.point - expect).norm(), 0.0, 1e-12)
          << "segment " << seg << " t " << t;
      // The limit stays on the line.
      EXPECT_NEAR(s.point.y(), 2.0 * s.point.x(), 1e-12);
    }
  }
}

void CheckDyadic(const SurfaceMesh& linear, const FeatureModel& model,
                 int levels, int stride) {
  ControlMesh cm = compute_control_mesh(linear, model);
  LimitEvaluator ev(cm.mesh, model);
  oracle::DyadicOracle oracle(cm.mesh, model, levels);
  const int n = 1 << levels;
  for (int t = 0; t < linear.num_triangles(); t += stride)
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) {
        Bary3 xi{double(n - i - j) / n, double(i) / n, double(j) / n};
        Vec3 expect = oracle.eval(t, n - i - j, i, j);
        LimitSample s = ev.map_onto_limit(t, xi);
        ASSERT_NEAR((s.point - expect).norm(), 0.0, 1e-9)
            << "triangle " << t << " at (" << n - i - j << "," << i << ","
            << j << ")/" << n;
        ASSERT_FALSE(s.fallback);
      }
}

TEST(DyadicOracle, BandedSphere) {
  meshgen::TaggedSurface s = meshgen::banded_sphere(102);
  CheckDyadic(s.mesh, s.model(), 3, 7);
}

TEST(DyadicOracle, CubeWithCorners) {
  meshgen::TaggedSurface s = meshgen::cube_surface(2);
  CheckDyadic(s.mesh, s.model(), 3, 1);
}

TEST(DyadicOracle, WingAndCylinder) {
  meshgen::TaggedSurface w = meshgen::wing({10, 3, 1.0, 0.12});
  CheckDyadic(w.mesh, w.model(), 2, 3);
  meshgen::CylinderOptions o;
  o.around = 10;
  o.rows = 3;
  o.cap_rings = 2;
  o.cap_seam = true;
  meshgen::TaggedSurface c = meshgen::cylinder(o);
  CheckDyadic(c.mesh, c.model(), 3, 5);
}

TEST(DyadicOracle, IcosphereTwoIrregularCorners) {
  SurfaceMesh s = meshgen::icosphere(0);
  CheckDyadic(s, FeatureModel::single_surface(s.num_triangles()), 4, 4);
}

TEST(LimitEvaluator, WatertightAcrossEdges) {
  meshgen::TaggedSurface s = meshgen::banded_sphere(102);
  FeatureModel m = s.model();
  LimitEvaluator ev(compute_control_mesh(s.mesh, m).mesh, m);
  for (int e = 0; e < s.mesh.num_edges(); ++e) {
    const auto& tt = s.mesh.edge_triangles(e);
    const Edge& ed = s.mesh.edges()[e];
    for (double u : {0.1, 0.37, 0.5}) {
      Vec3 p[2];
      for (int side = 0; side < 2; ++side) {
        const Tri& tri = s.mesh.triangle(tt[side]);
        Bary3 xi{0, 0, 0};
        for (int k = 0; k < 3; ++k) {
          if (tri[k] == ed.a) xi[k] = 1.0 - u;
          if (tri[k] == ed.b) xi[k] = u;
        }
        p[side] = ev.map_onto_limit(tt[side], xi).point;
      }
      EXPECT_NEAR((p[0] - p[1]).norm(), 0.0, 1e-12) << "edge " << e;
    }
  }
}

TEST(LimitEvaluator, AffineEquivariant) {
  meshgen::TaggedSurface s = meshgen::banded_sphere(102);
  FeatureModel m = s.model();
  Eigen::Matrix3d A;
  A << 0.9, 0.2, 0.0, -0.3, 1.1, 0.2, 0.1, 0.0, 0.7;
  Vec3 b(1.0, 2.0, -0.5);
  std::vector<Vec3> moved;
  for (const Vec3& p : s.mesh.vertices()) moved.push_back(A * p + b);
  LimitEvaluator e1(s.mesh, m), e2(s.mesh.with_positions(moved), m);
  for (int t = 0; t < s.mesh.num_triangles(); t += 9)
    for (const Bary3& xi : {Bary3{0.2, 0.3, 0.5}, Bary3{0.9, 0.05, 0.05}})
      EXPECT_NEAR((A * e1.map_onto_limit(t, xi).point + b -
                   e2.map_onto_limit(t, xi).point).norm(), 0.0, 1e-12);
}

TEST(LimitEvaluator, InvalidInput) {
  SurfaceMesh s = meshgen::icosphere(0);
  LimitEvaluator ev(s, FeatureModel::single_surface(s.num_triangles()));
  EXPECT_THROW(ev.map_onto_limit(0, {0.5, 0.6, -0.1}), MeshError);
  EXPECT_THROW(ev.map_onto_limit(0, {0.5, 0.6, 0.1}), MeshError);
  EXPECT_THROW(ev.map_onto_limit(99, {1, 0, 0}), MeshError);
  EXPECT_THROW(ev.map_onto_limit_surface(7, 0, {0.2, 0.3, 0.5}), MeshError);
}

}  // namespace
}  // namespace subcurve
