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

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace subcurve {

using Vec3 = Eigen::Vector3d;
using Tri = std::array<int, 3>;
using Tet = std::array<int, 4>;
using Bary3 = std::array<double, 3>;
using FeatureId = std::uint32_t;

/** Base class of all errors raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** Input mesh or model violates a structural invariant. */
class MeshError : public Error {
 public:
  using Error::Error;
};

/** Requested capability is not available (degree, node family, format). */
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/** Linear solve did not reach the residual bound. */
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/** Failure reading or writing a file. */
class IoError : public Error {
 public:
  using Error::Error;
};

/**
 * Edge given by its two end vertices. Curves store edges in traversal order;
 * use key() for direction-independent lookup.
 */
struct Edge {
  int a = -1;
  int b = -1;

  Edge() = default;
  Edge(int a_, int b_) : a(a_), b(b_) {}

  int lo() const { return std::min(a, b); }
  int hi() const { return std::max(a, b); }
  std::uint64_t key() const { return edge_key(a, b); }
  Edge canonical() const { return {lo(), hi()}; }
  Edge reversed() const { return {b, a}; }
  bool operator==(const Edge& o) const { return a == o.a && b == o.b; }
  bool operator<(const Edge& o) const {
    return a != o.a ? a < o.a : b < o.b;
  }

  static std::uint64_t edge_key(int u, int v) {
    auto lo = static_cast<std::uint32_t>(std::min(u, v));
    auto hi = static_cast<std::uint32_t>(std::max(u, v));
    return (std::uint64_t(lo) << 32) | hi;
  }
  static Edge from_key(std::uint64_t k) {
    return {static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu)};
  }
};

inline std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")";
}

inline Vec3 bary_point(const Vec3& a, const Vec3& b, const Vec3& c,
                       const Bary3& xi) {
  return xi[0] * a + xi[1] * b + xi[2] * c;
}

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

inline double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c,
                         const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

/** Axis-aligned bounds of a point set. */
struct BoundingBox {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void add(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  double diagonal() const {
    return lo[0] <= hi[0] ? (hi - lo).norm() : 0.0;
  }
};

inline BoundingBox bounding_box(const std::vector<Vec3>& pts) {
  BoundingBox box;
  for (const auto& p : pts) box.add(p);
  return box;
}

}  // namespace subcurve
