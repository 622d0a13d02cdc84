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

#include <memory>

#include "subcurve/ho_mesh.hpp"
#include "subcurve/limit_eval.hpp"
#include "subcurve/parallel.hpp"

namespace subcurve {

/** Evaluates points of one triangle: map(tri, xis, out). */
using TriangleMap =
    std::function<void(int, std::span<const Bary3>, std::span<Vec3>)>;

/**
 * Builds the degree-q mesh over a linear triangle mesh, placing every
 * global node once from its owning element through the given map.
 */
inline HighOrderMesh interpolate_surface(const SurfaceMesh& linear,
                                         const FeatureModel& model,
                                         const NodalDistribution& dist,
                                         const TriangleMap& map) {
  if (dist.dim != 2) throw UnsupportedError("surface needs a 2D distribution");
  HoTopology topo = build_ho_topology(linear, dist.degree);
  HighOrderMesh ho;
  ho.dim = 2;
  ho.degree = dist.degree;
  ho.kind = dist.kind;
  ho.elements = topo.elements;
  ho.nodes.assign(topo.num_nodes, Vec3::Zero());
  ho.element_tags = surface_tags(linear, model);

  std::vector<std::vector<int>> owned(linear.num_triangles());
  for (int g = 0; g < topo.num_nodes; ++g) {
    auto [e, local] = topo.owner[g];
    if (e >= 0) owned[e].push_back(local);
  }
  parallel_for(linear.num_triangles(), [&](int e) {
    if (owned[e].empty()) return;
    std::vector<Bary3> xis;
    for (int local : owned[e]) xis.push_back(dist.bary3(local));
    std::vector<Vec3> out(xis.size());
    map(e, xis, out);
    for (size_t i = 0; i < xis.size(); ++i)
      ho.nodes[topo.elements[e][owned[e][i]]] = out[i];
  });
  // Isolated vertices keep their position.
  for (int v = 0; v < linear.num_vertices(); ++v)
    if (topo.owner[v].first < 0) ho.nodes[v] = linear.vertex(v);

  ho.curves = induced_curves(linear, model, topo);
  ho.points = model.points;
  return ho;
}

/** Straight-sided degree-q elevation of a linear triangle mesh. */
inline HighOrderMesh elevate_surface(const SurfaceMesh& linear,
                                     const FeatureModel& model,
                                     const NodalDistribution& dist) {
  return interpolate_surface(
      linear, model, dist,
      [&](int t, std::span<const Bary3> xis, std::span<Vec3> out) {
        const Tri& tri = linear.triangle(t);
        for (size_t i = 0; i < xis.size(); ++i)
          out[i] = bary_point(linear.vertex(tri[0]), linear.vertex(tri[1]),
                              linear.vertex(tri[2]), xis[i]);
      });
}

struct SurfaceCurvingOptions {
  int pre_refine = 0;
  int depth_cap = 48;
};

struct SurfaceCurvingResult {
  HighOrderMesh mesh;
  /** Straight-sided mesh the elements are built on (refined when
   *  pre_refine > 0) and its model. */
  SurfaceMesh linear;
  FeatureModel model;
  std::shared_ptr<const LimitEvaluator> evaluator;
  double control_residual = 0.0;
  int fallback_count = 0;
};

/** Control-mesh solve plus optional global refinement of the control mesh. */
inline std::shared_ptr<const LimitEvaluator> make_limit_evaluator(
    const SurfaceMesh& linear, const FeatureModel& model, int pre_refine = 0,
    int depth_cap = 48, double* residual = nullptr) {
  ControlMesh cm = compute_control_mesh(linear, model);
  if (residual) *residual = cm.residual;
  SurfaceMesh mesh = std::move(cm.mesh);
  FeatureModel mdl = model;
  for (int r = 0; r < pre_refine; ++r) {
    RefinedSurface fine = subdivide_surface(mesh, mdl);
    mesh = std::move(fine.mesh);
    mdl = std::move(fine.model);
  }
  return std::make_shared<const LimitEvaluator>(std::move(mesh),
                                                std::move(mdl), depth_cap);
}

/** Straight-sided mesh matching an evaluator's topology: the input mesh,
 *  or its midpoint split when the control mesh was refined. */
inline SurfaceMesh linear_for_refinement(const SurfaceMesh& linear,
                                         int pre_refine) {
  SurfaceMesh m = linear;
  for (int r = 0; r < pre_refine; ++r) m = split_midpoint(m);
  return m;
}

/**
 * Degree-q surface mesh interpolating the limit model of a linear mesh.
 * With pre_refine = 0, q = 1 returns the input vertices.
 */
inline SurfaceCurvingResult generate_ho_surface_mesh(
    const SurfaceMesh& linear, const FeatureModel& model,
    const NodalDistribution& dist, const SurfaceCurvingOptions& opt = {}) {
  SurfaceCurvingResult res;
  res.evaluator = make_limit_evaluator(linear, model, opt.pre_refine,
                                       opt.depth_cap, &res.control_residual);
  res.model = res.evaluator->model();
  res.linear = linear_for_refinement(linear, opt.pre_refine);
  std::atomic<int> fallbacks{0};
  const LimitEvaluator& ev = *res.evaluator;
  res.mesh = interpolate_surface(
      res.linear, res.model, dist,
      [&](int t, std::span<const Bary3> xis, std::span<Vec3> out) {
        std::vector<LimitSample> s(xis.size());
        ev.map_onto_limit(t, xis, s);
        for (size_t i = 0; i < xis.size(); ++i) {
          out[i] = s[i].point;
          if (s[i].fallback) ++fallbacks;
        }
      });
  res.fallback_count = fallbacks;
  // Vertex limits equal the input up to the solve residual; keep the input.
  for (int v = 0; v < linear.num_vertices(); ++v)
    res.mesh.nodes[v] = linear.vertex(v);
  return res;
}

}  // namespace subcurve
