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

#include <filesystem>

#include "subcurve/interpolation.hpp"
#include "subcurve/io/gmsh.hpp"
#include "subcurve/io/json_io.hpp"
#include "subcurve/io/vtu.hpp"
#include "subcurve/meshgen.hpp"

namespace subcurve {
namespace {

using namespace meshgen;

std::string TempPath(const std::string& name) {
  const auto* info = testing::UnitTest::GetInstance()->current_test_info();
  return (std::filesystem::path(testing::TempDir()) /
          (std::string(info->test_suite_name()) + "_" + info->name() + "_" + name))
      .string();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::array<int, 3>> LatticeCoords(int dim, int q) {
  std::vector<std::array<int, 3>> out;
  for (const Multi& m : simplex_lattice(dim, q)) out.push_back({m[1], m[2], m[3]});
  return out;
}

void ExpectSameMesh(const HighOrderMesh& a, const HighOrderMesh& b) {
  EXPECT_EQ(a.dim, b.dim);
  EXPECT_EQ(a.degree, b.degree);
  EXPECT_EQ(a.kind, b.kind);
  ASSERT_EQ(a.num_nodes(), b.num_nodes());
  for (int i = 0; i < a.num_nodes(); ++i) EXPECT_EQ(a.nodes[i], b.nodes[i]) << i;
  EXPECT_EQ(a.elements, b.elements);
  EXPECT_EQ(a.element_tags, b.element_tags);
  ASSERT_EQ(a.curves.size(), b.curves.size());
  for (size_t i = 0; i < a.curves.size(); ++i) {
    EXPECT_EQ(a.curves[i].curve, b.curves[i].curve);
    EXPECT_EQ(a.curves[i].nodes, b.curves[i].nodes);
  }
  EXPECT_EQ(a.points, b.points);
  ASSERT_EQ(a.facets.size(), b.facets.size());
  for (size_t i = 0; i < a.facets.size(); ++i) {
    EXPECT_EQ(a.facets[i].surface, b.facets[i].surface);
    EXPECT_EQ(a.facets[i].nodes, b.facets[i].nodes);
  }
}

HighOrderMesh CurvedCube(int q, NodeKind kind) {
  TaggedSurface cube = cube_surface(2);
  return generate_ho_surface_mesh(cube.mesh, cube.model(),
                                  make_distribution(q, kind, 2))
      .mesh;
}

TEST(MshTypes, TableAndInverse) {
  EXPECT_EQ(msh_element_type(1, 1), 1);
  EXPECT_EQ(msh_element_type(2, 1), 2);
  EXPECT_EQ(msh_element_type(3, 1), 4);
  EXPECT_EQ(msh_element_type(2, 2), 9);
  EXPECT_EQ(msh_element_type(3, 2), 11);
  EXPECT_EQ(msh_element_type(2, 10), 46);
  EXPECT_EQ(msh_element_type(3, 10), 75);
  EXPECT_EQ(msh_element_type(0, 1), 15);
  for (int d = 0; d <= 3; ++d)
    for (int q = 1; q <= 10; ++q) {
      auto [dim, deg] = msh_type_info(msh_element_type(d, q));
      EXPECT_EQ(dim, d);
      if (d > 0) EXPECT_EQ(deg, q);
    }
  EXPECT_THROW(msh_element_type(2, 11), UnsupportedError);
  EXPECT_EQ(msh_type_info(3).first, -1);
}

TEST(MshTypes, LatticeIsGmshOrder) {
  const std::vector<std::array<int, 3>> tri = {
      {0, 0, 0}, {4, 0, 0}, {0, 4, 0}, {1, 0, 0}, {2, 0, 0},
      {3, 0, 0}, {3, 1, 0}, {2, 2, 0}, {1, 3, 0}, {0, 3, 0},
      {0, 2, 0}, {0, 1, 0}, {1, 1, 0}, {2, 1, 0}, {1, 2, 0}};
  EXPECT_EQ(LatticeCoords(2, 4), tri);
  const std::vector<std::array<int, 3>> tet = {
      {0, 0, 0}, {4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {1, 0, 0}, {2, 0, 0},
      {3, 0, 0}, {3, 1, 0}, {2, 2, 0}, {1, 3, 0}, {0, 3, 0}, {0, 2, 0},
      {0, 1, 0}, {0, 0, 3}, {0, 0, 2}, {0, 0, 1}, {0, 1, 3}, {0, 2, 2},
      {0, 3, 1}, {1, 0, 3}, {2, 0, 2}, {3, 0, 1}, {1, 1, 0}, {1, 2, 0},
      {2, 1, 0}, {1, 0, 1}, {2, 0, 1}, {1, 0, 2}, {0, 1, 1}, {0, 1, 2},
      {0, 2, 1}, {1, 1, 2}, {2, 1, 1}, {1, 2, 1}, {1, 1, 1}};
  EXPECT_EQ(LatticeCoords(3, 4), tet);
  const std::vector<std::array<int, 3>> line = {
      {0, 0, 0}, {4, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  EXPECT_EQ(LatticeCoords(1, 4), line);
}

TEST(VtkOrder, TetDegreeFour) {
  const std::vector<std::array<int, 3>> vtk = {
      {0, 0, 0}, {4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {1, 0, 0}, {2, 0, 0},
      {3, 0, 0}, {3, 1, 0}, {2, 2, 0}, {1, 3, 0}, {0, 3, 0}, {0, 2, 0},
      {0, 1, 0}, {0, 0, 1}, {0, 0, 2}, {0, 0, 3}, {3, 0, 1}, {2, 0, 2},
      {1, 0, 3}, {0, 3, 1}, {0, 2, 2}, {0, 1, 3}, {1, 0, 1}, {2, 0, 1},
      {1, 0, 2}, {1, 2, 1}, {1, 1, 2}, {2, 1, 1}, {0, 1, 1}, {0, 1, 2},
      {0, 2, 1}, {1, 1, 0}, {1, 2, 0}, {2, 1, 0}, {1, 1, 1}};
  const auto ours = LatticeCoords(3, 4);
  const std::vector<int> order = vtk_node_order(3, 4);
  ASSERT_EQ(order.size(), vtk.size());
  for (size_t i = 0; i < vtk.size(); ++i) EXPECT_EQ(ours[order[i]], vtk[i]) << i;
}

TEST(VtkOrder, PermutationsForAllDegrees) {
  for (int dim : {2, 3})
    for (int q = 1; q <= 12; ++q) {
      std::vector<int> order = vtk_node_order(dim, q);
      ASSERT_EQ(static_cast<int>(order.size()), simplex_size(dim, q));
      std::sort(order.begin(), order.end());
      for (int i = 0; i < static_cast<int>(order.size()); ++i)
        EXPECT_EQ(order[i], i);
    }
  // Triangles share the Gmsh order.
  const std::vector<int> tri = vtk_node_order(2, 7);
  for (int i = 0; i < static_cast<int>(tri.size()); ++i) EXPECT_EQ(tri[i], i);
}

TEST(MshRoundTrip, SurfaceBothVersions) {
  const HighOrderMesh ho = CurvedCube(4, NodeKind::WarpBlend);
  ASSERT_FALSE(ho.curves.empty());
  ASSERT_EQ(ho.points.size(), 8u);
  for (MshVersion v : {MshVersion::V22, MshVersion::V41}) {
    const std::string path =
        TempPath(v == MshVersion::V22 ? "v22.msh" : "v41.msh");
    write_msh(ho, path, v);
    ExpectSameMesh(ho, read_ho_mesh(path));
  }
}

TEST(MshRoundTrip, VolumeWithFacets) {
  TaggedVolume box = box_tets(2, 2, 1);
  VolumeCurvingResult r = generate_ho_volume_mesh(box.mesh, box.features, 3);
  const HighOrderMesh& ho = r.mesh;
  ASSERT_FALSE(ho.facets.empty());
  for (MshVersion v : {MshVersion::V22, MshVersion::V41}) {
    const std::string path = TempPath("vol.msh");
    write_msh(ho, path, v);
    ExpectSameMesh(ho, read_ho_mesh(path));
  }
}

TEST(MshRoundTrip, FieldsAndNaN) {
  const HighOrderMesh ho = CurvedCube(2, NodeKind::Equispaced);
  MeshFields f;
  f.element.push_back({"quality", {}});
  for (int e = 0; e < ho.num_elements(); ++e)
    f.element[0].values.push_back(e == 3 ? std::nan("") : 1.0 / (e + 1));
  f.node.push_back({"height", {}});
  for (const Vec3& x : ho.nodes) f.node[0].values.push_back(x.z());
  for (MshVersion v : {MshVersion::V22, MshVersion::V41}) {
    const std::string path = TempPath("fields.msh");
    write_msh(ho, path, v, f);
    MeshFields back;
    read_ho_mesh(path, &back);
    ASSERT_EQ(back.element.size(), 1u);
    ASSERT_EQ(back.node.size(), 1u);
    EXPECT_EQ(back.element[0].name, "quality");
    EXPECT_EQ(back.node[0].name, "height");
    for (int e = 0; e < ho.num_elements(); ++e) {
      if (e == 3) EXPECT_TRUE(std::isnan(back.element[0].values[e]));
      else EXPECT_EQ(back.element[0].values[e], f.element[0].values[e]);
    }
    EXPECT_EQ(back.node[0].values, f.node[0].values);
  }
  f.element[0].values.pop_back();
  EXPECT_THROW(write_msh(ho, TempPath("bad.msh"), MshVersion::V41, f), IoError);
}

TEST(MshWrite, DegreeElevenIsUnsupported) {
  SurfaceMesh tri({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {Tri{0, 1, 2}});
  FeatureModel m = complete_model(tri, FeatureModel::single_surface(1));
  HighOrderMesh ho =
      elevate_surface(tri, m, make_distribution(11, NodeKind::Equispaced, 2));
  EXPECT_THROW(write_msh(ho, TempPath("q11.msh")), UnsupportedError);
  ho = elevate_surface(tri, m, make_distribution(10, NodeKind::Equispaced, 2));
  EXPECT_NO_THROW(write_msh(ho, TempPath("q10.msh")));
}

TEST(MshWrite, ZeroIdIsRejected) {
  SurfaceMesh tri({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {Tri{0, 1, 2}});
  FeatureModel m = complete_model(tri, FeatureModel::single_surface(1, 0));
  HighOrderMesh ho =
      elevate_surface(tri, m, make_distribution(1, NodeKind::Equispaced, 2));
  EXPECT_THROW(write_msh(ho, TempPath("zero.msh")), IoError);
}

TEST(LoadLinear, SingleTetWithTaggedFaces) {
  const std::string path = TempPath("tet.msh");
  WriteText(path,
            "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
            "$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n$EndNodes\n"
            "$Elements\n5\n"
            "1 2 2 1 1 1 3 2\n2 2 2 2 2 1 2 4\n3 2 2 3 3 1 4 3\n"
            "4 2 2 4 4 2 3 4\n5 4 2 9 9 1 2 3 4\n$EndElements\n");
  LoadedMesh m = load_linear_mesh(path);
  ASSERT_EQ(m.dim, 3);
  EXPECT_EQ(m.volume.num_vertices(), 4);
  EXPECT_EQ(m.volume.num_tets(), 1);
  ASSERT_EQ(m.features.surfaces.size(), 4u);
  for (FeatureId id = 1; id <= 4; ++id) EXPECT_EQ(m.features.surfaces[id].size(), 1u);
  BoundaryExtraction b = extract_boundary(m.volume, m.features);
  EXPECT_EQ(b.model.surfaces.size(), 4u);
  EXPECT_EQ(b.model.curves.size(), 6u);
  EXPECT_EQ(b.model.points.size(), 4u);
}

TEST(LoadLinear, TwoTrianglesSameTag) {
  const std::string path = TempPath("quad.msh");
  WriteText(path,
            "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
            "$Nodes\n4\n10 0 0 0\n20 1 0 0\n30 1 1 0\n40 0 1 0\n$EndNodes\n"
            "$Elements\n2\n1 2 2 7 7 10 20 30\n2 2 2 7 7 10 30 40\n$EndElements\n");
  LoadedMesh m = load_linear_mesh(path);
  ASSERT_EQ(m.dim, 2);
  EXPECT_EQ(m.surface.num_triangles(), 2);
  ASSERT_EQ(m.model.surfaces.size(), 1u);
  EXPECT_EQ(m.model.surfaces.at(7), (std::vector<int>{0, 1}));
}

TEST(LoadLinear, NonManifoldEdgeIsNamed) {
  const std::string path = TempPath("fin.msh");
  WriteText(path,
            "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
            "$Nodes\n5\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 -1 0\n5 0 0 1\n$EndNodes\n"
            "$Elements\n3\n1 2 2 1 1 1 2 3\n2 2 2 1 1 2 1 4\n3 2 2 1 1 1 2 5\n"
            "$EndElements\n");
  try {
    load_linear_mesh(path);
    FAIL() << "expected MeshError";
  } catch (const MeshError& e) {
    EXPECT_NE(std::string(e.what()).find("non-manifold edge (0,1)"),
              std::string::npos)
        << e.what();
  }
}

TEST(LoadLinear, Gmsh41WithoutPhysicalTags) {
  // Entity tags stand in for physical tags; nodes carry parametric coords.
  const std::string path = TempPath("entities.msh");
  WriteText(path,
            "$MeshFormat\n4.1 0 8\n$EndMeshFormat\n"
            "$Entities\n0 0 2 0\n"
            "5 0 0 0 1 1 0 0 0\n6 0 0 0 1 1 0 0 0\n$EndEntities\n"
            "$Nodes\n2 4 1 4\n2 5 1 3\n1\n2\n3\n0 0 0 0 0\n1 0 0 1 0\n"
            "1 1 0 1 1\n2 6 0 1\n4\n0 1 0\n$EndNodes\n"
            "$Elements\n2 2 1 2\n2 5 2 1\n1 1 2 3\n2 6 2 1\n2 1 3 4\n"
            "$EndElements\n");
  LoadedMesh m = load_linear_mesh(path);
  ASSERT_EQ(m.dim, 2);
  EXPECT_EQ(m.surface.num_vertices(), 4);
  EXPECT_EQ(m.model.surfaces.at(5), (std::vector<int>{0}));
  EXPECT_EQ(m.model.surfaces.at(6), (std::vector<int>{1}));
  // The interface splits the outer boundary into two arcs at its ends.
  EXPECT_EQ(m.model.curves.size(), 3u);
  EXPECT_EQ(m.model.points.size(), 2u);
}

TEST(LoadLinear, CubeRoundTrip) {
  TaggedSurface cube = cube_surface(3);
  const FeatureModel model = cube.model();
  for (MshVersion v : {MshVersion::V22, MshVersion::V41}) {
    const std::string path = TempPath("cube.msh");
    write_linear_msh(cube.mesh, model, path, v);
    LoadedMesh m = load_linear_mesh(path);
    ASSERT_EQ(m.dim, 2);
    EXPECT_EQ(m.surface.vertices(), cube.mesh.vertices());
    EXPECT_EQ(m.surface.triangles(), cube.mesh.triangles());
    EXPECT_EQ(m.model.surfaces, model.surfaces);
    EXPECT_EQ(m.model.points, model.points);
    ASSERT_EQ(m.model.curves.size(), 12u);
    for (const auto& [id, edges] : model.curves) {
      const auto& got = m.model.curves.at(id);
      ASSERT_EQ(got.size(), edges.size());
      for (size_t i = 0; i < edges.size(); ++i) EXPECT_EQ(got[i].key(), edges[i].key());
    }
  }
}

TEST(LoadLinear, ShuffledCurveEdgesAreChained) {
  TaggedSurface cyl = cylinder();
  FeatureModel model = cyl.model();
  for (auto& [id, edges] : model.curves) std::reverse(edges.begin() + 1, edges.end());
  const std::string path = TempPath("cyl.msh");
  write_linear_msh(cyl.mesh, model, path);
  LoadedMesh m = load_linear_mesh(path);
  for (const auto& [id, edges] : m.model.curves)
    for (size_t i = 0; i + 1 < edges.size(); ++i) EXPECT_EQ(edges[i].b, edges[i + 1].a);
}

TEST(LoadLinear, VolumeRoundTrip) {
  TaggedVolume box = box_tets(2, 3, 2);
  const std::string path = TempPath("box.msh");
  write_linear_msh(box.mesh, box.features, path);
  LoadedMesh m = load_linear_mesh(path);
  ASSERT_EQ(m.dim, 3);
  EXPECT_EQ(m.volume.vertices(), box.mesh.vertices());
  EXPECT_EQ(m.volume.tets(), box.mesh.tets());
  EXPECT_EQ(m.features.points, box.features.points);
  EXPECT_EQ(m.features.surfaces, box.features.surfaces);
  BoundaryExtraction a = extract_boundary(box.mesh, box.features);
  BoundaryExtraction b = extract_boundary(m.volume, m.features);
  EXPECT_EQ(a.model.surfaces, b.model.surfaces);
  EXPECT_EQ(a.model.points, b.model.points);
  EXPECT_EQ(a.model.curves.size(), b.model.curves.size());
}

TEST(LoadLinear, Errors) {
  EXPECT_THROW(load_linear_mesh(TempPath("missing.msh")), IoError);
  const std::string bin = TempPath("bin.msh");
  WriteText(bin, "$MeshFormat\n4.1 1 8\n$EndMeshFormat\n");
  EXPECT_THROW(load_linear_mesh(bin), IoError);
  const std::string junk = TempPath("junk.msh");
  WriteText(junk, "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n2\n1 0 x 0\n");
  EXPECT_THROW(load_linear_mesh(junk), IoError);
  const std::string quads = TempPath("quad.msh");
  WriteText(quads,
            "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n4\n1 0 0 0\n2 1 0 0\n"
            "3 1 1 0\n4 0 1 0\n$EndNodes\n$Elements\n1\n1 3 2 1 1 1 2 3 4\n"
            "$EndElements\n");
  EXPECT_THROW(load_linear_mesh(quads), IoError);
}

TEST(Vtu, CellsAndFields) {
  TaggedVolume box = box_tets(1, 1, 1);
  HighOrderMesh ho = elevate_volume(box.mesh, 3);
  MeshFields f;
  f.element.push_back({"quality", std::vector<double>(ho.num_elements(), 1.0)});
  const std::string path = TempPath("box.vtu");
  write_vtu(ho, path, f);
  const std::string text = ReadText(path);
  EXPECT_NE(text.find("NumberOfPoints=\"" + std::to_string(ho.num_nodes()) + "\""),
            std::string::npos);
  EXPECT_NE(text.find("NumberOfCells=\"" + std::to_string(ho.num_elements()) + "\""),
            std::string::npos);
  EXPECT_NE(text.find("Name=\"quality\""), std::string::npos);
  EXPECT_NE(text.find("\n71\n"), std::string::npos);
  f.element[0].values.pop_back();
  EXPECT_THROW(write_vtu(ho, path, f), IoError);
}

TEST(Json, FeatureModelRoundTrip) {
  TaggedSurface cyl = cylinder();
  const FeatureModel m = cyl.model();
  const FeatureModel back = feature_model_from_json(Json::parse(to_json(m).dump()));
  EXPECT_EQ(back.points, m.points);
  EXPECT_EQ(back.surfaces, m.surfaces);
  ASSERT_EQ(back.curves.size(), m.curves.size());
  for (const auto& [id, edges] : m.curves) {
    ASSERT_EQ(back.curves.at(id).size(), edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
      EXPECT_EQ(back.curves.at(id)[i].a, edges[i].a);
      EXPECT_EQ(back.curves.at(id)[i].b, edges[i].b);
    }
  }
  TaggedVolume box = box_tets(1, 1, 1);
  const VolumeFeatures vb =
      volume_features_from_json(Json::parse(to_json(box.features).dump()));
  EXPECT_EQ(vb.surfaces, box.features.surfaces);
  EXPECT_EQ(vb.points, box.features.points);
}

TEST(Json, PlanFromReviewedSuggestions) {
  std::vector<SmoothingSuggestion> s = {{4, SuggestionKind::Curve, 0.5, 17, 0},
                                        {9, SuggestionKind::Curve, 3.0, 17, 0},
                                        {2, SuggestionKind::Point, 0.0, 17, 2}};
  Json j = to_json(s);
  j["suggestions"][1]["accept"] = false;
  SmoothingPlan p = smoothing_plan_from_json(j);
  EXPECT_EQ(p.curves, (std::vector<FeatureId>{4}));
  EXPECT_EQ(p.points, (std::vector<FeatureId>{2}));

  SmoothingPlan direct{{3, 5}, {7}};
  SmoothingPlan back = smoothing_plan_from_json(to_json(direct));
  EXPECT_EQ(back.curves, direct.curves);
  EXPECT_EQ(back.points, direct.points);

  EXPECT_THROW(smoothing_plan_from_json(Json::parse(R"({"curves": ["a"]})")), IoError);
  EXPECT_THROW(feature_model_from_json(Json::parse(R"({"points": {"x": 1}})")), IoError);
}

TEST(Json, ReportsUseNullForNonFinite) {
  QualityReport r{"TFI", {1.0, 0.0}, 0.0, 1, {1}};
  Json j = to_json(r);
  EXPECT_EQ(j["stage"], "TFI");
  EXPECT_EQ(j["inverted"], 1);
  NormalAngleReport a{{std::nan(""), 2.0}, 2.0, 1, 0};
  EXPECT_TRUE(to_json(a)["per_edge"][0].is_null());
}

}  // namespace
}  // namespace subcurve
