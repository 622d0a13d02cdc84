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

#include "subcurve/simplex.hpp"

namespace subcurve {

enum class NodeKind { Equispaced, WarpBlend };

inline const char* node_kind_name(NodeKind k) {
  return k == NodeKind::Equispaced ? "equispaced" : "warpblend";
}

inline NodeKind parse_node_kind(const std::string& s) {
  if (s == "equispaced" || s == "eq") return NodeKind::Equispaced;
  if (s == "warpblend" || s == "warp-and-blend" || s == "wb")
    return NodeKind::WarpBlend;
  throw UnsupportedError("unknown node distribution '" + s + "'");
}

/** Interpolation nodes of a simplex in canonical lattice order. */
struct NodalDistribution {
  int dim = 2;
  int degree = 1;
  NodeKind kind = NodeKind::Equispaced;
  std::vector<Multi> lattice;
  std::vector<Bary4> points;

  int size() const { return static_cast<int>(points.size()); }
  Bary3 bary3(int i) const {
    return {points[i][0], points[i][1], points[i][2]};
  }
};

namespace detail {

/** Optimized blend parameters of the warp-and-blend triangle family,
 *  degrees 1..15. */
inline constexpr std::array<double, 15> kWarpBlendAlpha = {
    0.0000, 0.0000, 1.4152, 0.1001, 0.2751, 0.9800, 1.0999, 1.2832,
    1.3648, 1.4773, 1.4959, 1.5743, 1.5770, 1.6223, 1.6258};

/** Displacement from equispaced to Gauss-Lobatto points, interpolated in
 *  r and divided by the edge blend 1 - r^2. */
inline double warp_factor(int q, double r) {
  if (std::abs(r) >= 1.0 - 1e-10) return 0.0;
  const std::vector<double> gll = gauss_lobatto(q);
  double warp = 0.0;
  for (int i = 0; i <= q; ++i) {
    const double ri = -1.0 + 2.0 * i / q;
    double l = 1.0;
    for (int j = 0; j <= q; ++j) {
      if (j == i) continue;
      const double rj = -1.0 + 2.0 * j / q;
      l *= (r - rj) / (ri - rj);
    }
    warp += l * (gll[i] - ri);
  }
  return warp / (1.0 - r * r);
}

inline Bary4 warp_blend_point(int q, const Multi& m) {
  const double alpha = kWarpBlendAlpha[q - 1];
  const double L1 = double(m[0]) / q, L2 = double(m[1]) / q,
               L3 = double(m[2]) / q;
  const double s3 = std::sqrt(3.0);
  double x = -L2 + L3;
  double y = (2.0 * L1 - L2 - L3) / s3;
  const double w1 = 4.0 * L2 * L3 * warp_factor(q, L3 - L2) *
                    (1.0 + (alpha * L1) * (alpha * L1));
  const double w2 = 4.0 * L1 * L3 * warp_factor(q, L1 - L3) *
                    (1.0 + (alpha * L2) * (alpha * L2));
  const double w3 = 4.0 * L1 * L2 * warp_factor(q, L2 - L1) *
                    (1.0 + (alpha * L3) * (alpha * L3));
  const double a2 = 2.0 * std::numbers::pi / 3.0, a3 = 4.0 * std::numbers::pi / 3.0;
  x += w1 + std::cos(a2) * w2 + std::cos(a3) * w3;
  y += std::sin(a2) * w2 + std::sin(a3) * w3;
  const double l1 = (s3 * y + 1.0) / 3.0;
  const double l3 = (1.0 - l1 + x) / 2.0;
  const double l2 = (1.0 - l1 - x) / 2.0;
  return {l1, l2, l3, 0.0};
}

/** Forces exact zeros on the sub-simplex a lattice point belongs to. */
inline Bary4 snap_to_support(const Multi& m, Bary4 p, int dim) {
  double s = 0.0;
  for (int i = 0; i <= dim; ++i) {
    if (m[i] == 0) p[i] = 0.0;
    s += p[i];
  }
  for (int i = 0; i <= dim; ++i) p[i] /= s;
  int nz = 0;
  for (int i = 0; i <= dim; ++i) nz += m[i] != 0;
  if (nz == 1)
    for (int i = 0; i <= dim; ++i) p[i] = m[i] != 0 ? 1.0 : 0.0;
  return p;
}

}  // namespace detail

/**
 * Degree-q nodes on a simplex. Warp-and-blend is available on triangles for
 * q <= 10; tetrahedra and segments use equispaced nodes, and segments
 * accept warp-and-blend as Gauss-Lobatto.
 */
inline NodalDistribution make_distribution(int q, NodeKind kind,
                                           int dim = 2) {
  if (q < 1) throw UnsupportedError("degree must be at least 1");
  NodalDistribution d;
  d.dim = dim;
  d.degree = q;
  d.kind = kind;
  d.lattice = simplex_lattice(dim, q);
  if (kind == NodeKind::WarpBlend && dim == 3)
    throw UnsupportedError("warp-and-blend nodes are not provided for tets");
  if (kind == NodeKind::WarpBlend && dim == 2 && q > 10)
    throw UnsupportedError("warp-and-blend nodes supported up to degree 10");
  std::vector<double> gll;
  if (kind == NodeKind::WarpBlend && dim == 1) gll = gauss_lobatto(q);
  for (const Multi& m : d.lattice) {
    Bary4 p{};
    if (kind == NodeKind::Equispaced || q <= 2) {
      for (int i = 0; i <= dim; ++i) p[i] = double(m[i]) / q;
    } else if (dim == 1) {
      double r = gll[m[1]];
      p = {0.5 * (1.0 - r), 0.5 * (1.0 + r), 0.0, 0.0};
    } else {
      p = detail::warp_blend_point(q, m);
    }
    d.points.push_back(detail::snap_to_support(m, p, dim));
  }
  return d;
}

inline NodalBasis make_basis(const NodalDistribution& d) {
  return NodalBasis(d.dim, d.degree, d.points);
}

/** Edge-node parameters (from the first vertex) of a distribution,
 *  interior nodes only, in lattice order of edge 0-1. */
inline std::vector<double> edge_parameters(const NodalDistribution& d) {
  std::vector<double> t;
  for (int i = 0; i < d.size(); ++i) {
    const Multi& m = d.lattice[i];
    bool on01 = m[0] > 0 && m[1] > 0;
    for (int k = 2; k <= d.dim; ++k) on01 = on01 && m[k] == 0;
    if (on01) t.push_back(d.points[i][1]);
  }
  return t;
}

}  // namespace subcurve
