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

#include "subcurve/interpolation.hpp"

namespace subcurve {

// Distance to the limit model.

struct DistanceReport {
  /** Largest element distance per surface, in length units. */
  std::map<FeatureId, double> per_surface;
  /** Per-element distance, in length units. */
  std::vector<double> per_element;
  /** Max over surfaces divided by the characteristic length. */
  double model_distance = 0.0;
  double characteristic_length = 1.0;
  int grid_degree = 20;
  int grid_points = 0;
};

/** Sampling grid for element distances: the degree-g equispaced lattice
 *  followed by the distribution's own nodes. */
inline std::vector<Bary3> distance_grid(const NodalDistribution& dist,
                                        int grid_degree = 20) {
  std::vector<Bary3> g;
  for (const Multi& m : simplex_lattice(2, grid_degree))
    g.push_back({double(m[0]) / grid_degree, double(m[1]) / grid_degree,
                 double(m[2]) / grid_degree});
  for (int i = 0; i < dist.size(); ++i) g.push_back(dist.bary3(i));
  return g;
}

/**
 * Largest distance between the limit parameterization and the isoparametric
 * map of element e over the grid. Element e must sit on triangle e of the
 * evaluator's control mesh.
 */
inline double element_distance(const LimitEvaluator& ev,
                               const HighOrderMesh& ho, const NodalBasis& basis,
                               int e, std::span<const Bary3> grid) {
  std::vector<LimitSample> lim(grid.size());
  ev.map_onto_limit(e, grid, lim);
  std::vector<double> phi(basis.size());
  double worst = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    const double lam[3] = {grid[i][0], grid[i][1], grid[i][2]};
    basis.values(lam, phi.data());
    Vec3 x = Vec3::Zero();
    for (int j = 0; j < basis.size(); ++j)
      x += phi[j] * ho.nodes[ho.elements[e][j]];
    worst = std::max(worst, (x - lim[i].point).norm());
  }
  return worst;
}

/**
 * Distance between the limit model and a degree-q surface mesh: the largest
 * element distance over each surface, and their maximum over the
 * characteristic length.
 */
inline DistanceReport model_distance(const LimitEvaluator& ev,
                                     const HighOrderMesh& ho,
                                     const NodalDistribution& dist,
                                     double characteristic_length,
                                     int grid_degree = 20) {
  if (!(characteristic_length > 0.0))
    throw UnsupportedError("characteristic length must be positive");
  if (ho.dim != 2 || ho.num_elements() != ev.control().num_triangles())
    throw MeshError("model_distance: mesh does not match the evaluator");
  const NodalBasis basis = make_basis(dist);
  const std::vector<Bary3> grid = distance_grid(dist, grid_degree);
  DistanceReport r;
  r.characteristic_length = characteristic_length;
  r.grid_degree = grid_degree;
  r.grid_points = static_cast<int>(grid.size());
  r.per_element.assign(ho.num_elements(), 0.0);
  parallel_for(ho.num_elements(), [&](int e) {
    r.per_element[e] = element_distance(ev, ho, basis, e, grid);
  });
  const auto& tags = ev.index().triangle_surfaces();
  for (int e = 0; e < ho.num_elements(); ++e) {
    double& s = r.per_surface[tags[e]];
    s = std::max(s, r.per_element[e]);
  }
  double worst = 0.0;
  for (const auto& [id, d] : r.per_surface) worst = std::max(worst, d);
  r.model_distance = worst / characteristic_length;
  return r;
}

// Lebesgue constants.

struct LebesgueReport {
  int degree = 1;
  NodeKind kind = NodeKind::Equispaced;
  double lambda = 1.0;
  int resolution = 200;
  double condition = 1.0;
};

/** Vandermonde condition above which interpolation results are refused. */
inline constexpr double kMaxVandermondeCondition = 1e13;

/**
 * Max over the degree-`resolution` lattice of the triangle of the sum of
 * absolute Lagrange basis values.
 */
inline LebesgueReport lebesgue_constant(const NodalDistribution& dist,
                                        int resolution = 200) {
  if (resolution < 100)
    throw UnsupportedError("Lebesgue grid needs at least 100 points per edge");
  const NodalBasis basis = make_basis(dist);
  LebesgueReport r;
  r.degree = dist.degree;
  r.kind = dist.kind;
  r.resolution = resolution;
  r.condition = basis.condition();
  if (r.condition > kMaxVandermondeCondition)
    throw SolverError("Vandermonde matrix ill-conditioned (condition " +
                          std::to_string(r.condition) + ")",
                      r.condition);
  const std::vector<Multi> lattice = simplex_lattice(dist.dim, resolution);
  std::vector<double> best(lattice.size());
  parallel_for(static_cast<int>(lattice.size()), [&](int i) {
    double lam[4] = {0, 0, 0, 0};
    for (int k = 0; k <= dist.dim; ++k)
      lam[k] = double(lattice[i][k]) / resolution;
    std::vector<double> phi(basis.size());
    basis.values(lam, phi.data());
    double s = 0.0;
    for (double v : phi) s += std::abs(v);
    best[i] = s;
  });
  r.lambda = *std::max_element(best.begin(), best.end());
  return r;
}

/** Bounds (d / (1 + Lambda), d) on the best-approximation error. */
inline std::pair<double, double> best_approx_bounds(double distance,
                                                    double lambda) {
  return {distance / (1.0 + lambda), distance};
}

// Normal and tangent angles.

inline double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

/** Unnormalized normal and position of a triangle element at lam. */
inline std::pair<Vec3, Vec3> element_normal(const HighOrderMesh& ho,
                                            const NodalBasis& basis, int e,
                                            const Bary3& lam) {
  const int n = basis.size();
  std::vector<double> val(n), grad(2 * size_t(n));
  basis.gradients(lam.data(), val.data(), grad.data());
  Vec3 x = Vec3::Zero(), d1 = Vec3::Zero(), d2 = Vec3::Zero();
  for (int j = 0; j < n; ++j) {
    const Vec3& p = ho.nodes[ho.elements[e][j]];
    x += val[j] * p;
    d1 += grad[2 * j] * p;
    d2 += grad[2 * j + 1] * p;
  }
  return {d1.cross(d2), x};
}

/** Barycentric point at parameter s along edge (a, b) of triangle t. */
inline Bary3 edge_point(const Tri& t, int a, int b, double s) {
  Bary3 xi{0, 0, 0};
  for (int k = 0; k < 3; ++k) {
    if (t[k] == a) xi[k] = 1.0 - s;
    if (t[k] == b) xi[k] = s;
  }
  return xi;
}

struct EdgeAngle {
  /** Degrees; NaN when every sample was degenerate. */
  double angle = 0.0;
  int flagged = 0;
};

/**
 * Largest angle between the normals of the two elements on a linear edge,
 * sampled at `samples` interior points. Samples with a vanishing normal are
 * flagged and skipped.
 */
inline EdgeAngle edge_normal_angle(const HighOrderMesh& ho,
                                   const NodalBasis& basis,
                                   const SurfaceMesh& linear, int edge,
                                   int samples = 20) {
  const auto& tt = linear.edge_triangles(edge);
  if (tt[1] < 0) throw MeshError("edge_normal_angle: boundary edge");
  const Edge& ed = linear.edges()[edge];
  EdgeAngle r;
  double worst = -1.0;
  for (int k = 1; k <= samples; ++k) {
    const double s = double(k) / (samples + 1);
    Vec3 n[2];
    for (int side = 0; side < 2; ++side)
      n[side] = element_normal(ho, basis, tt[side],
                               edge_point(linear.triangle(tt[side]), ed.a,
                                          ed.b, s))
                    .first;
    const double l0 = n[0].norm(), l1 = n[1].norm();
    if (!(l0 > 1e-300) || !(l1 > 1e-300)) {
      ++r.flagged;
      continue;
    }
    const double c = std::clamp(n[0].dot(n[1]) / (l0 * l1), -1.0, 1.0);
    // atan2 keeps precision for nearly parallel normals.
    const double a = std::atan2(n[0].cross(n[1]).norm(), l0 * l1 * c);
    worst = std::max(worst, a);
  }
  r.angle = worst < 0 ? std::numeric_limits<double>::quiet_NaN() : degrees(worst);
  return r;
}

struct NormalAngleReport {
  /** Per linear edge, degrees; NaN on feature curves and boundaries. */
  std::vector<double> per_edge;
  double max_angle = 0.0;
  int max_edge = -1;
  int flagged_samples = 0;
};

/** Normal angles on all edges interior to a feature surface. */
inline NormalAngleReport normal_angles(const HighOrderMesh& ho,
                                       const NodalDistribution& dist,
                                       const SurfaceMesh& linear,
                                       const FeatureModel& model,
                                       int samples = 20) {
  const NodalBasis basis = make_basis(dist);
  ModelIndex index(linear, model);
  NormalAngleReport r;
  r.per_edge.assign(linear.num_edges(), std::numeric_limits<double>::quiet_NaN());
  std::vector<int> flagged(linear.num_edges(), 0);
  parallel_for(linear.num_edges(), [&](int e) {
    const Edge& ed = linear.edges()[e];
    if (linear.is_boundary_edge(e) || index.is_crease(ed.a, ed.b)) return;
    EdgeAngle a = edge_normal_angle(ho, basis, linear, e, samples);
    r.per_edge[e] = a.angle;
    flagged[e] = a.flagged;
  });
  for (int e = 0; e < linear.num_edges(); ++e) {
    r.flagged_samples += flagged[e];
    if (!std::isnan(r.per_edge[e]) &&
        (r.max_edge < 0 || r.per_edge[e] > r.max_angle)) {
      r.max_angle = r.per_edge[e];
      r.max_edge = e;
    }
  }
  return r;
}

/**
 * Arclength-weighted average of the normal angle along a curve, with a
 * 5-point Gauss rule per edge. Edges with a single incident triangle are
 * skipped; NaN when nothing is left.
 */
inline double curve_average_angle(const HighOrderMesh& ho,
                                  const NodalBasis& basis,
                                  const SurfaceMesh& linear,
                                  const FeatureModel& model, FeatureId curve) {
  auto it = model.curves.find(curve);
  if (it == model.curves.end())
    throw MeshError("curve_average_angle: unknown curve " + std::to_string(curve));
  std::vector<double> gx, gw;
  gauss_legendre(5, gx, gw);
  double num = 0.0, den = 0.0, length = 0.0;
  const int n = basis.size();
  std::vector<double> val(n), grad(2 * size_t(n));
  for (const Edge& ed : it->second) {
    const int e = linear.edge_index(ed.a, ed.b);
    const auto& tt = linear.edge_triangles(e);
    for (int g = 0; g < 5; ++g) {
      const double s = 0.5 * (gx[g] + 1.0);
      Vec3 nrm[2];
      Vec3 tangent = Vec3::Zero();
      for (int side = 0; side < (tt[1] < 0 ? 1 : 2); ++side) {
        const Tri& tri = linear.triangle(tt[side]);
        const Bary3 xi = edge_point(tri, ed.a, ed.b, s);
        basis.gradients(xi.data(), val.data(), grad.data());
        Vec3 d1 = Vec3::Zero(), d2 = Vec3::Zero();
        for (int j = 0; j < n; ++j) {
          const Vec3& p = ho.nodes[ho.elements[tt[side]][j]];
          d1 += grad[2 * j] * p;
          d2 += grad[2 * j + 1] * p;
        }
        nrm[side] = d1.cross(d2);
        if (side == 0) {
          // d lam / ds along the edge, through r = (lam_1, lam_2).
          Bary3 dl{0, 0, 0};
          for (int k = 0; k < 3; ++k) {
            if (tri[k] == ed.a) dl[k] = -1.0;
            if (tri[k] == ed.b) dl[k] = 1.0;
          }
          tangent = dl[1] * d1 + dl[2] * d2;
        }
      }
      const double w = 0.5 * gw[g] * tangent.norm();
      length += w;
      if (tt[1] < 0) continue;
      const double l0 = nrm[0].norm(), l1 = nrm[1].norm();
      if (!(l0 > 1e-300) || !(l1 > 1e-300)) continue;
      const double a =
          std::atan2(nrm[0].cross(nrm[1]).norm(), nrm[0].dot(nrm[1]));
      num += w * a;
      den += w;
    }
  }
  if (!(length > 0.0))
    throw MeshError("curve_average_angle: zero-length curve " +
                    std::to_string(curve));
  if (!(den > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return degrees(num / den);
}

/** Curve edges at each feature point, oriented away from it, with their
 *  curve ids. A point inside a curve sees that curve twice. */
inline std::map<FeatureId, std::vector<std::pair<FeatureId, Edge>>>
point_curve_edges(const FeatureModel& model) {
  std::map<FeatureId, std::vector<std::pair<FeatureId, Edge>>> out;
  std::map<int, FeatureId> at;
  for (const auto& [id, v] : model.points) {
    at[v] = id;
    out[id];
  }
  for (const auto& [cid, edges] : model.curves)
    for (const Edge& e : edges) {
      if (auto it = at.find(e.a); it != at.end())
        out[it->second].emplace_back(cid, e);
      if (auto it = at.find(e.b); it != at.end())
        out[it->second].emplace_back(cid, e.reversed());
    }
  return out;
}

/**
 * Angle in degrees between the two curve branches meeting at a feature
 * point: 0 when one continues the other in a straight line. Tangents come
 * from the degree-q curve edges at the point.
 */
inline double point_tangent_angle(const HighOrderMesh& ho,
                                  const NodalBasis& basis,
                                  const SurfaceMesh& linear,
                                  const FeatureModel& model, FeatureId point) {
  const auto branches = point_curve_edges(model).at(point);
  if (branches.size() != 2)
    throw MeshError("point_tangent_angle: point " + std::to_string(point) +
                    " does not join exactly two curves");
  const int n = basis.size();
  std::vector<double> val(n), grad(2 * size_t(n));
  Vec3 t[2];
  for (int c = 0; c < 2; ++c) {
    const Edge& ed = branches[c].second;
    const int e = linear.edge_index(ed.a, ed.b);
    const int tri_id = linear.edge_triangles(e)[0];
    const Tri& tri = linear.triangle(tri_id);
    basis.gradients(edge_point(tri, ed.a, ed.b, 0.0).data(), val.data(),
                    grad.data());
    Vec3 d1 = Vec3::Zero(), d2 = Vec3::Zero();
    for (int j = 0; j < n; ++j) {
      const Vec3& p = ho.nodes[ho.elements[tri_id][j]];
      d1 += grad[2 * j] * p;
      d2 += grad[2 * j + 1] * p;
    }
    Bary3 dl{0, 0, 0};
    for (int k = 0; k < 3; ++k) {
      if (tri[k] == ed.a) dl[k] = -1.0;
      if (tri[k] == ed.b) dl[k] = 1.0;
    }
    t[c] = dl[1] * d1 + dl[2] * d2;
  }
  // Straight continuation means the outgoing tangents are opposite.
  return degrees(std::atan2(t[0].cross(-t[1]).norm(), t[0].dot(-t[1])));
}

// Assisted feature detection.

enum class SuggestionKind { Curve, Point };

struct SmoothingSuggestion {
  FeatureId id = 0;
  SuggestionKind kind = SuggestionKind::Curve;
  /** Average normal angle (curves) or tangent angle (points), degrees. */
  double angle = 0.0;
  double delta = 0.0;
  int incident_curves = 0;
};

/**
 * Curves whose average normal angle is below delta. With points = true, also
 * points joining exactly two curves with a tangent angle below delta, and
 * points without curves; points joining one or more than two curves are
 * left to the user.
 */
inline std::vector<SmoothingSuggestion> detect_smooth_candidates(
    const HighOrderMesh& ho, const NodalDistribution& dist,
    const SurfaceMesh& linear, const FeatureModel& model, double delta,
    bool curves = true, bool points = false) {
  if (!(delta > 0.0 && delta < 180.0))
    throw UnsupportedError("delta must lie in (0, 180) degrees");
  const NodalBasis basis = make_basis(dist);
  std::vector<SmoothingSuggestion> out;
  if (curves) {
    for (const auto& [id, edges] : model.curves) {
      const double a = curve_average_angle(ho, basis, linear, model, id);
      if (a < delta)
        out.push_back({id, SuggestionKind::Curve, a, delta, 0});
    }
  }
  if (points) {
    for (const auto& [id, inc] : point_curve_edges(model)) {
      const int k = static_cast<int>(inc.size());
      if (k == 0) {
        out.push_back({id, SuggestionKind::Point, 0.0, delta, 0});
      } else if (k == 2) {
        const double a = point_tangent_angle(ho, basis, linear, model, id);
        if (a < delta) out.push_back({id, SuggestionKind::Point, a, delta, 2});
      }
    }
  }
  return out;
}

}  // namespace subcurve
