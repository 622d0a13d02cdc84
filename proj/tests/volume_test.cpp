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
#include "subcurve/volume.hpp"

namespace subcurve {
namespace {

// Lagrange interpolation through points x at parameters t.
Vec3 Lagrange1d(const std::vector<double>& t, const std::vector<Vec3>& x,
                double s) {
  Vec3 out = Vec3::Zero();
  for (size_t i = 0; i < t.size(); ++i) {
    double w = 1.0;
    for (size_t j = 0; j < t.size(); ++j)
      if (j != i) w *= (s - t[j]) / (t[i] - t[j]);
    out += w * x[i];
  }
  return out;
}

// Degree-q polynomial in (u, v) through the points, fitted on monomials.
struct Poly2d {
  int q;
  Eigen::MatrixXd c;  // monomials x 3
  Poly2d(int q_, const std::vector<std::array<double, 2>>& uv,
         const std::vector<Vec3>& x)
      : q(q_) {
    const int n = static_cast<int>(uv.size());
    Eigen::MatrixXd V(n, n), X(n, 3);
    for (int i = 0; i < n; ++i) {
      V.row(i) = Monomials(uv[i][0], uv[i][1]).transpose();
      X.row(i) = x[i].transpose();
    }
    c = V.fullPivLu().solve(X);
  }
  Eigen::VectorXd Monomials(double u, double v) const {
    Eigen::VectorXd m((q + 1) * (q + 2) / 2);
    int k = 0;
    for (int a = 0; a <= q; ++a)
      for (int b = 0; a + b <= q; ++b) m(k++) = std::pow(u, a) * std::pow(v, b);
    return m;
  }
  Vec3 operator()(double u, double v) const {
    return (c.transpose() * Monomials(u, v)).transpose();
  }
};

Vec3 AffineLattice(const std::array<Vec3, 4>& v, const Bary4& l, int d) {
  Vec3 x = Vec3::Zero();
  for (int k = 0; k <= d; ++k) x += l[k] * v[k];
  return x;
}

TEST(SmoothFeatures, EmptyPlanIsIdentity) {
  meshgen::TaggedSurface c = meshgen::cube_surface(2);
  FeatureModel m = c.model();
  EXPECT_EQ(smooth_features(c.mesh, m, {}), m);
}

TEST(SmoothFeatures, CubeEdge) {
  meshgen::TaggedSurface c = meshgen::cube_surface(2);
  FeatureModel m = c.model();
  ASSERT_EQ(m.surfaces.size(), 6u);
  ASSERT_EQ(m.curves.size(), 12u);
  const FeatureId cid = m.curves.begin()->first;
  const std::vector<Edge> smoothed = m.curves.at(cid);
  FeatureModel s = smooth_features(c.mesh, m, {{cid}, {}});
  EXPECT_EQ(s.surfaces.size(), 5u);
  EXPECT_EQ(s.curves.size(), 11u);
  EXPECT_EQ(s.points, m.points);
  // Recount incident curves at the smoothed curve's end points.
  for (int v : {smoothed.front().a, smoothed.back().b}) {
    int count = 0;
    for (const auto& [id, edges] : s.curves)
      for (const Edge& e : edges) count += (e.a == v) + (e.b == v);
    EXPECT_EQ(count, 2);
  }
  // The merged surface keeps the smaller id and both triangle sets.
  std::set<FeatureId> both;
  for (int t = 0; t < c.mesh.num_triangles(); ++t)
    for (const Edge& e : smoothed)
      for (int side = 0; side < 2; ++side)
        if (c.mesh.edge_triangles(c.mesh.edge_index(e.a, e.b))[side] == t)
          both.insert(c.tags[t]);
  ASSERT_EQ(both.size(), 2u);
  EXPECT_EQ(s.surfaces.at(*both.begin()).size(),
            m.surfaces.at(*both.begin()).size() +
                m.surfaces.at(*both.rbegin()).size());
  EXPECT_FALSE(s.surfaces.count(*both.rbegin()));
}

TEST(SmoothFeatures, PointsJoinCurves) {
  meshgen::TaggedSurface c = meshgen::cube_surface(2);
  FeatureModel m = c.model();
  const FeatureId cid = m.curves.begin()->first;
  const int end = m.curves.at(cid).front().a;
  FeatureId pid = 0;
  for (const auto& [id, v] : m.points)
    if (v == end) pid = id;
  // Three curves meet at a cube corner.
  EXPECT_THROW(smooth_features(c.mesh, m, {{}, {pid}}), MeshError);
  FeatureModel s = smooth_features(c.mesh, m, {{cid}, {pid}});
  EXPECT_EQ(s.points.size(), 7u);
  EXPECT_EQ(s.curves.size(), 10u);
  EXPECT_THROW(smooth_features(c.mesh, m, {{999}, {}}), MeshError);
  EXPECT_THROW(smooth_features(c.mesh, m, {{}, {999}}), MeshError);
}

TEST(SmoothFeatures, SeamPointOnLoop) {
  meshgen::CylinderOptions o;
  o.cap_seam = true;
  meshgen::TaggedSurface c = meshgen::cylinder(o);
  FeatureModel m = c.model();
  // Smooth the seam curves, then the points they leave on the rim.
  SmoothingPlan plan;
  std::set<FeatureId> cap{2, 4};
  for (const auto& [id, edges] : m.curves) {
    const Edge& e = edges.front();
    const auto& tt = c.mesh.edge_triangles(c.mesh.edge_index(e.a, e.b));
    if (cap.count(c.tags[tt[0]]) && cap.count(c.tags[tt[1]]))
      plan.curves.push_back(id);
  }
  ASSERT_FALSE(plan.curves.empty());
  FeatureModel s = smooth_features(c.mesh, m, plan);
  EXPECT_EQ(s.surfaces.size(), 3u);
  for (const auto& [id, v] : s.points) plan.points.push_back(id);
  FeatureModel t = smooth_features(c.mesh, m, plan);
  EXPECT_TRUE(t.points.empty());
  EXPECT_EQ(t.curves.size(), 2u);
  for (const auto& [id, edges] : t.curves) {
    EXPECT_EQ(edges.size(), 24u);
    EXPECT_EQ(edges.front().a, edges.back().b);
  }
}

TEST(Tfi, EdgeExamples) {
  std::vector<double> t = {0.25, 0.5, 0.75};
  auto x = tfi_edge({0, 0, 0}, {1, 0, 0}, t);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(x[k], Vec3(t[k], 0, 0));
  for (const Vec3& p : tfi_edge({1, 2, 3}, {1, 2, 3}, t)) EXPECT_EQ(p, Vec3(1, 2, 3));
  // Displacing an endpoint by d moves node k by (1 - t_k) d.
  Vec3 d(0.1, -0.2, 0.3);
  auto y = tfi_edge(d, {1, 0, 0}, t);
  for (int k = 0; k < 3; ++k)
    EXPECT_NEAR((y[k] - x[k] - (1 - t[k]) * d).norm(), 0.0, 1e-16);
}

TEST(Tfi, ReproducesAffineMaps) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int d : {2, 3})
    for (int q = 2; q <= 8; ++q) {
      NodalDistribution dist = make_distribution(q, NodeKind::Equispaced, d);
      std::array<Vec3, 4> v;
      for (auto& p : v) p = Vec3(u(rng), u(rng), u(rng));
      std::vector<Vec3> x(dist.size());
      for (int i = 0; i < dist.size(); ++i) x[i] = AffineLattice(v, dist.points[i], d);
      std::vector<Vec3> y = x;
      for (int i = 0; i < dist.size(); ++i) {
        bool interior = true;
        for (int k = 0; k <= d; ++k) interior = interior && dist.lattice[i][k] > 0;
        if (interior) y[i] = Vec3(9, 9, 9);
      }
      d == 2 ? tfi_face(dist, y) : tfi_tet(dist, y);
      for (int i = 0; i < dist.size(); ++i)
        EXPECT_LE((y[i] - x[i]).norm(), 1e-14) << "d=" << d << " q=" << q;
    }
}

// Triangle (0,0), (1,0), (0,1) with edge 1-2 (opposite vertex 0) bent by a
// symmetric quadratic bump.
std::vector<Vec3> BumpedTriangle(const NodalDistribution& dist, double h) {
  std::vector<Vec3> x(dist.size());
  for (int i = 0; i < dist.size(); ++i) {
    const Bary4& l = dist.points[i];
    x[i] = Vec3(l[1], l[2], 0);
    if (dist.lattice[i][0] == 0) x[i] += h * 4 * l[1] * l[2] * Vec3(1, 1, 0);
  }
  return x;
}

TEST(Tfi, FaceMatchesFormula) {
  for (int q : {3, 4, 6}) {
    NodalDistribution dist = make_distribution(q, NodeKind::Equispaced);
    std::vector<Vec3> x = BumpedTriangle(dist, 0.2);
    std::vector<Vec3> y = x;
    tfi_face(dist, y);
    // Edge maps through the edge nodes, parameterized by the second vertex.
    auto edge = [&](int a, int b, double s) {
      std::vector<double> t;
      std::vector<Vec3> p;
      for (int i = 0; i < dist.size(); ++i) {
        const Multi& m = dist.lattice[i];
        if (m[3 - a - b] != 0) continue;
        t.push_back(double(m[b]) / q);
        p.push_back(x[i]);
      }
      return Lagrange1d(t, p, s);
    };
    for (int i = 0; i < dist.size(); ++i) {
      const Multi& m = dist.lattice[i];
      if (m[0] == 0 || m[1] == 0 || m[2] == 0) continue;
      const Bary4& l = dist.points[i];
      // x_hat = sum_j l_j (P_a^j + P_b^j - x_j) over the two edges at j.
      Vec3 expect = l[0] * (edge(0, 2, l[2]) + edge(0, 1, l[1]) - x[0]) +
                    l[1] * (edge(1, 2, l[2]) + edge(0, 1, 1 - l[0]) - x[1]) +
                    l[2] * (edge(1, 2, 1 - l[1]) + edge(0, 2, 1 - l[0]) - x[2]);
      EXPECT_NEAR((y[i] - expect).norm(), 0.0, 1e-13) << q;
    }
  }
}

TEST(Tfi, FaceBumpSymmetry) {
  NodalDistribution dist = make_distribution(4, NodeKind::Equispaced);
  std::vector<Vec3> y = BumpedTriangle(dist, 0.2);
  tfi_face(dist, y);
  // Mirror x <-> y swaps vertices 1 and 2.
  for (int i = 0; i < dist.size(); ++i) {
    Multi m = dist.lattice[i];
    std::swap(m[1], m[2]);
    int j = static_cast<int>(std::find(dist.lattice.begin(), dist.lattice.end(), m) -
                             dist.lattice.begin());
    EXPECT_NEAR(y[i].x(), y[j].y(), 1e-15);
  }
  // The node on the mirror axis moves toward the bump.
  int c = -1;
  for (int i = 0; i < dist.size(); ++i)
    if (dist.lattice[i] == Multi{2, 1, 1, 0}) c = i;
  EXPECT_NEAR(y[c].x(), y[c].y(), 1e-15);
  EXPECT_GT(y[c].x(), 0.25);
}

TEST(Tfi, CentroidOfSymmetricFace) {
  NodalDistribution dist = make_distribution(3, NodeKind::Equispaced);
  const double s3 = std::sqrt(3.0);
  std::array<Vec3, 3> v = {Vec3(1, 0, 0), Vec3(-0.5, s3 / 2, 0),
                           Vec3(-0.5, -s3 / 2, 0)};
  std::vector<Vec3> x(dist.size());
  for (int i = 0; i < dist.size(); ++i) {
    const Bary4& l = dist.points[i];
    x[i] = l[0] * v[0] + l[1] * v[1] + l[2] * v[2];
    // Push edge nodes outward radially by the same profile on every edge.
    const Multi& m = dist.lattice[i];
    if ((m[0] == 0) + (m[1] == 0) + (m[2] == 0) == 1)
      x[i] += 0.1 * x[i].normalized();
  }
  tfi_face(dist, x);
  for (int i = 0; i < dist.size(); ++i)
    if (dist.lattice[i] == Multi{1, 1, 1, 0}) {
      EXPECT_NEAR(x[i].norm(), 0.0, 1e-15);
    }
}

TEST(Tfi, TetMatchesFormula) {
  const int q = 4;
  NodalDistribution dist = make_distribution(q, NodeKind::Equispaced, 3);
  std::array<Vec3, 4> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  std::vector<Vec3> x(dist.size());
  for (int i = 0; i < dist.size(); ++i) {
    const Bary4& l = dist.points[i];
    x[i] = AffineLattice(v, l, 3);
    // Face opposite vertex 0 bulges along (1,1,1).
    if (dist.lattice[i][0] == 0)
      x[i] += 0.3 * 27 * l[1] * l[2] * l[3] * Vec3(1, 1, 1) +
              0.1 * (l[1] * l[2] + l[2] * l[3]) * Vec3(1, 0, 0);
  }
  std::vector<Vec3> y = x;
  tfi_tet(dist, y);

  // Face map: polynomial through the face nodes in its two free coordinates.
  auto face = [&](int gone, const Bary4& p) {
    std::vector<int> free;
    for (int k = 0; k < 4; ++k)
      if (k != gone) free.push_back(k);
    std::vector<std::array<double, 2>> uv;
    std::vector<Vec3> pts;
    for (int i = 0; i < dist.size(); ++i)
      if (dist.lattice[i][gone] == 0) {
        uv.push_back({dist.points[i][free[1]], dist.points[i][free[2]]});
        pts.push_back(x[i]);
      }
    return Poly2d(q, uv, pts)(p[free[1]], p[free[2]]);
  };
  auto edge = [&](int a, int b, double s) {
    std::vector<double> t;
    std::vector<Vec3> pts;
    for (int i = 0; i < dist.size(); ++i) {
      const Multi& m = dist.lattice[i];
      if (m[a] + m[b] != q) continue;
      t.push_back(double(m[b]) / q);
      pts.push_back(x[i]);
    }
    return Lagrange1d(t, pts, s);
  };
  for (int i = 0; i < dist.size(); ++i) {
    const Multi& m = dist.lattice[i];
    if (m[0] == 0 || m[1] == 0 || m[2] == 0 || m[3] == 0) continue;
    const Bary4& l = dist.points[i];
    Vec3 expect = Vec3::Zero();
    for (int j = 0; j < 4; ++j) {
      Vec3 term = x[j];
      for (int f = 0; f < 4; ++f) {
        if (f == j) continue;
        Bary4 p = l;
        p[f] = 0;
        p[j] = 0;
        p[j] = 1 - (p[0] + p[1] + p[2] + p[3]);
        term += face(f, p);
      }
      for (int a = 0; a < 4; ++a)
        if (a != j)
          term -= edge(j, a, l[a]);
      expect += l[j] * term;
    }
    EXPECT_NEAR((y[i] - expect).norm(), 0.0, 1e-12);
  }
}

TEST(Tfi, OctantInteriorStaysInside) {
  for (int q : {4, 5, 6}) {
    NodalDistribution dist = make_distribution(q, NodeKind::Equispaced, 3);
    std::array<Vec3, 4> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0),
                             Vec3(0, 0, 1)};
    std::vector<Vec3> x(dist.size());
    for (int i = 0; i < dist.size(); ++i) {
      x[i] = AffineLattice(v, dist.points[i], 3);
      // Radial map of the straight tet onto the ball octant.
      if (x[i].norm() > 0) x[i] *= x[i].lpNorm<1>() / x[i].norm();
    }
    tfi_tet(dist, x);
    for (int i = 0; i < dist.size(); ++i) {
      EXPECT_GT(x[i].minCoeff(), -1e-15);
      EXPECT_LT(x[i].norm(), 1.0 + 1e-15);
    }
  }
}

TEST(Tfi, EdgesFollowRelocatedVertices) {
  meshgen::TaggedVolume box = meshgen::box_tets(2, 2, 2);
  for (int q : {2, 3, 5}) {
    HighOrderMesh ho = elevate_volume(box.mesh, q);
    std::vector<char> relocated(ho.num_nodes(), 0);
    // Move the interior vertex; every tet stays straight-sided.
    const int v = 9 + 4;
    ASSERT_EQ(ho.nodes[v], Vec3(0.5, 0.5, 0.5));
    ho.nodes[v].z() += 0.2;
    relocated[v] = 1;
    accommodate_curvature(ho, relocated);
    std::vector<Vec3> x = box.mesh.vertices();
    x[v].z() += 0.2;
    const NodalDistribution d = make_distribution(q, NodeKind::Equispaced, 3);
    for (int e = 0; e < ho.num_elements(); ++e) {
      const Tet& t = box.mesh.tet(e);
      std::array<Vec3, 4> c = {x[t[0]], x[t[1]], x[t[2]], x[t[3]]};
      for (int i = 0; i < d.size(); ++i)
        EXPECT_LE((ho.nodes[ho.elements[e][i]] - AffineLattice(c, d.points[i], 3)).norm(),
                  1e-14)
            << "q=" << q << " tet " << e << " node " << i;
    }
  }
}

TEST(VolumePipeline, SinusoidTopIsUntangled) {
  const int n = 6;
  const double h = 1.0 / n, lz = 0.5;
  meshgen::TaggedVolume box = meshgen::box_tets(n, n, n / 2, 1.0, 1.0, lz);
  VolumeCurvingOptions opt;
  opt.boundary_map = [&](const Vec3& p) {
    const double w = std::sin(2 * std::numbers::pi * p.x());
    return Vec3(p.x(), p.y(), p.z() + 0.3 * h * w * p.z() / lz);
  };
  VolumeCurvingResult r = generate_ho_volume_mesh(box.mesh, box.features, 4, opt);
  EXPECT_GT(r.reports[1].inverted, 0);
  EXPECT_EQ(r.reports[2].inverted, 0);
  EXPECT_GE(r.reports[2].min_quality, 0.5);
}

TEST(Quality, StraightElementsAreOne) {
  meshgen::TaggedVolume box = meshgen::box_tets(2, 1, 1, 2.0, 0.7, 1.3);
  for (int q : {1, 2, 4}) {
    HighOrderMesh ho = elevate_volume(box.mesh, q);
    QualityReport r = quality_report(ho, box.mesh.vertices(), "TFI");
    EXPECT_EQ(r.inverted, 0);
    for (double v : r.quality) EXPECT_NEAR(v, 1.0, 1e-12);
  }
  meshgen::TaggedSurface s = meshgen::banded_sphere(60);
  HighOrderMesh hs = elevate_surface(s.mesh, s.model(),
                                     make_distribution(3, NodeKind::WarpBlend));
  for (double v : quality_report(hs, s.mesh.vertices(), "boundary").quality)
    EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Quality, InvertedAndDistorted) {
  VolumeMesh one({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2, 3}});
  HighOrderMesh ho = elevate_volume(one, 2);
  // Push the midpoint of edge 0-3 through the opposite face.
  for (int n = 4; n < ho.num_nodes(); ++n)
    if ((ho.nodes[n] - Vec3(0, 0, 0.5)).norm() < 1e-14) ho.nodes[n] = Vec3(1, 1, 0.5);
  QualityReport r = quality_report(ho, one.vertices(), "no-TFI");
  EXPECT_EQ(r.quality[0], 0.0);
  EXPECT_EQ(r.inverted, 1);
  EXPECT_EQ(r.invalid, std::vector<int>{0});
  // A mild bend lowers the quality below one without inverting.
  HighOrderMesh bent = elevate_volume(one, 2);
  for (int n = 4; n < bent.num_nodes(); ++n)
    if ((bent.nodes[n] - Vec3(0, 0, 0.5)).norm() < 1e-14) bent.nodes[n].x() += 0.05;
  double q = quality_report(bent, one.vertices(), "no-TFI").quality[0];
  EXPECT_GT(q, 0.5);
  EXPECT_LT(q, 1.0);
}

TEST(Quality, SimilarityInvariant) {
  VolumeMesh one({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2, 3}});
  HighOrderMesh a = elevate_volume(one, 3);
  a.nodes[4].y() += 0.04;
  Eigen::Matrix3d R = Eigen::AngleAxisd(1.1, Vec3(1, -1, 2).normalized()).toRotationMatrix();
  HighOrderMesh b = a;
  std::vector<Vec3> ref;
  for (auto& p : b.nodes) p = 2.5 * R * p + Vec3(3, 1, 0);
  for (const Vec3& p : one.vertices()) ref.push_back(2.5 * R * p + Vec3(3, 1, 0));
  EXPECT_NEAR(quality_report(a, one.vertices(), "x").quality[0],
              quality_report(b, ref, "x").quality[0], 1e-12);
}

TEST(VolumePipeline, FlatBoxIsStraightElevation) {
  meshgen::TaggedVolume box = meshgen::box_tets(2, 2, 1);
  for (int q : {1, 2, 3}) {
    VolumeCurvingResult r = generate_ho_volume_mesh(box.mesh, box.features, q);
    HighOrderMesh straight = elevate_volume(box.mesh, q);
    ASSERT_EQ(r.mesh.num_nodes(), straight.num_nodes());
    for (int n = 0; n < straight.num_nodes(); ++n)
      EXPECT_LE((r.mesh.nodes[n] - straight.nodes[n]).norm(), 1e-14);
    EXPECT_EQ(r.reports.back().stage, "TFI");
    EXPECT_NEAR(r.reports.back().min_quality, 1.0, 1e-12);
    EXPECT_EQ(r.mesh.facets.size(), 2u * 2 * 2 * 2 + 2u * 2 * 1 * 2 * 2);
  }
}

TEST(VolumePipeline, DegreeOneIsInput) {
  meshgen::TaggedVolume box = meshgen::box_tets(2, 1, 1);
  VolumeCurvingResult r = generate_ho_volume_mesh(box.mesh, box.features, 1);
  EXPECT_EQ(r.mesh.nodes, box.mesh.vertices());
}

TEST(VolumePipeline, BallIsWatertight) {
  meshgen::TaggedVolume ball = meshgen::ball_tets(3);
  VolumeCurvingResult r = generate_ho_volume_mesh(ball.mesh, ball.features, 3);
  for (int n = 0; n < r.surface.num_nodes(); ++n)
    EXPECT_EQ(r.mesh.nodes[r.surface_to_volume[n]], r.surface.nodes[n]);
  EXPECT_GT(r.relocated_nodes, 0);
  ASSERT_EQ(r.reports.size(), 3u);
  EXPECT_LE(r.reports[2].inverted, r.reports[1].inverted);
  // Vertices stay at the input.
  for (int v = 0; v < ball.mesh.num_vertices(); ++v)
    EXPECT_EQ(r.mesh.nodes[v], ball.mesh.vertex(v));
}

TEST(VolumePipeline, SmoothingPlanOnlyChangesModel) {
  meshgen::TaggedVolume box = meshgen::box_tets(2, 2, 2);
  BoundaryExtraction b = extract_boundary(box.mesh, box.features);
  const FeatureId cid = b.model.curves.begin()->first;
  VolumeCurvingResult plain = generate_ho_volume_mesh(box.mesh, box.features, 2);
  VolumeCurvingResult smooth = curve_volume_mesh(box.mesh, box.features, 2, {{cid}, {}});
  EXPECT_EQ(smooth.boundary.model.surfaces.size(), 5u);
  EXPECT_EQ(smooth.boundary.model.curves.size(), 11u);
  EXPECT_EQ(plain.mesh.elements, smooth.mesh.elements);
}

TEST(VolumePipeline, OptimizeHookSeesInvalidElements) {
  meshgen::TaggedVolume box = meshgen::box_tets(2, 2, 1, 1.0, 1.0, 0.5);
  VolumeCurvingOptions opt;
  opt.boundary_map = [](const Vec3& p) {
    return std::abs(p.z() - 0.5) < 1e-12
               ? Vec3(p.x(), p.y(), p.z() + 0.4 * std::sin(2 * std::numbers::pi * p.x()))
               : p;
  };
  int calls = 0;
  opt.optimize = [&](HighOrderMesh&, const QualityReport& r) {
    ++calls;
    EXPECT_EQ(r.stage, "TFI");
  };
  VolumeCurvingResult r = generate_ho_volume_mesh(box.mesh, box.features, 3, opt);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(r.reports.back().stage, "post-optimization-hook");
}

}  // namespace
}  // namespace subcurve
