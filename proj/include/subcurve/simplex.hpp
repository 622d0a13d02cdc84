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

#include <Eigen/Dense>
#include <cmath>

#include "subcurve/dual.hpp"
#include "subcurve/mesh.hpp"

namespace subcurve {

/** Barycentric lattice index; components past the simplex dimension are 0. */
using Multi = std::array<int, 4>;
using Bary4 = std::array<double, 4>;

namespace detail {

inline void triangle_lattice_rec(int n, int off, std::vector<Multi>& out) {
  if (n < 0) return;
  if (n == 0) {
    out.push_back({off, off, off, 0});
    return;
  }
  out.push_back({n + off, off, off, 0});
  out.push_back({off, n + off, off, 0});
  out.push_back({off, off, n + off, 0});
  for (int k = 1; k < n; ++k) out.push_back({n - k + off, k + off, off, 0});
  for (int k = 1; k < n; ++k) out.push_back({off, n - k + off, k + off, 0});
  for (int k = 1; k < n; ++k) out.push_back({k + off, off, n - k + off, 0});
  triangle_lattice_rec(n - 3, off + 1, out);
}

inline void tet_lattice_rec(int n, int off, std::vector<Multi>& out) {
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
  for (const auto& e : kTetEdges) {
    for (int k = 1; k < n; ++k) {
      Multi m{off, off, off, off};
      m[e[0]] += n - k;
      m[e[1]] += k;
      out.push_back(m);
    }
  }
  std::vector<Multi> face;
  triangle_lattice_rec(n - 3, 1, face);
  for (const auto& f : kTetFaces) {
    for (const Multi& b : face) {
      Multi m{off, off, off, off};
      m[f[0]] += b[0];
      m[f[1]] += b[1];
      m[f[2]] += b[2];
      out.push_back(m);
    }
  }
  tet_lattice_rec(n - 4, off + 1, out);
}

}  // namespace detail

/**
 * Lattice points of a degree-q simplex in canonical order: vertices, then
 * edge interiors, face interiors and the element interior, recursively
 * (the Gmsh high-order convention). dim is 1, 2 or 3.
 */
inline std::vector<Multi> simplex_lattice(int dim, int q) {
  std::vector<Multi> out;
  if (q < 1) throw UnsupportedError("degree must be at least 1");
  if (dim == 1) {
    out.push_back({q, 0, 0, 0});
    out.push_back({0, q, 0, 0});
    for (int k = 1; k < q; ++k) out.push_back({q - k, k, 0, 0});
  } else if (dim == 2) {
    detail::triangle_lattice_rec(q, 0, out);
  } else if (dim == 3) {
    detail::tet_lattice_rec(q, 0, out);
  } else {
    throw UnsupportedError("simplex dimension must be 1, 2 or 3");
  }
  return out;
}

inline int simplex_size(int dim, int q) {
  if (dim == 1) return q + 1;
  if (dim == 2) return (q + 1) * (q + 2) / 2;
  return (q + 1) * (q + 2) * (q + 3) / 6;
}

/**
 * Homogenized Jacobi polynomials t^n P_n^(a,b)(x/t) for n = 0..N, which stay
 * polynomial in (x, t) and so differentiate cleanly at collapsed vertices.
 */
template <class T>
void jacobi_homogeneous(int N, double a, double b, const T& x, const T& t,
                        std::vector<T>& out) {
  out.assign(N + 1, T(1.0));
  if (N == 0) return;
  out[1] = ((a + b + 2.0) * x + (a - b) * t) / 2.0;
  for (int n = 1; n < N; ++n) {
    const double s = 2.0 * n + a + b;
    const double c0 = 2.0 * (n + 1) * (n + a + b + 1) * s;
    const double c1 = (s + 1) * (s + 2) * s;
    const double c2 = (s + 1) * (a * a - b * b);
    const double c3 = 2.0 * (n + a) * (n + b) * (s + 2);
    out[n + 1] =
        ((c1 * x + c2 * t) * out[n] - c3 * (t * t) * out[n - 1]) / c0;
  }
}

/**
 * Orthogonal (unnormalized PKD) basis of degree q on the simplex, written in
 * barycentric coordinates lam[0..dim].
 */
template <class T>
void pkd_basis(int dim, int q, const T* lam, std::vector<T>& out) {
  out.clear();
  std::vector<T> pa, pb, pc;
  if (dim == 1) {
    jacobi_homogeneous(q, 0, 0, lam[1] - lam[0], lam[0] + lam[1], pa);
    for (int i = 0; i <= q; ++i) out.push_back(pa[i]);
    return;
  }
  const T s01 = lam[0] + lam[1];
  jacobi_homogeneous(q, 0, 0, lam[1] - lam[0], s01, pa);
  if (dim == 2) {
    for (int i = 0; i <= q; ++i) {
      jacobi_homogeneous(q - i, 2.0 * i + 1, 0, lam[2] - s01,
                         s01 + lam[2], pb);
      for (int j = 0; i + j <= q; ++j) out.push_back(pa[i] * pb[j]);
    }
    return;
  }
  const T s012 = s01 + lam[2];
  for (int i = 0; i <= q; ++i) {
    jacobi_homogeneous(q - i, 2.0 * i + 1, 0, lam[2] - s01, s012, pb);
    for (int j = 0; i + j <= q; ++j) {
      jacobi_homogeneous(q - i - j, 2.0 * (i + j) + 2, 0, lam[3] - s012,
                         s012 + lam[3], pc);
      for (int k = 0; i + j + k <= q; ++k)
        out.push_back(pa[i] * pb[j] * pc[k]);
    }
  }
}

/**
 * Lagrange basis of the polynomials of degree q on a simplex through a given
 * node set. Gradients are with respect to reference coordinates
 * r_i = lam_i (i >= 1).
 */
class NodalBasis {
 public:
  NodalBasis() = default;

  NodalBasis(int dim, int q, const std::vector<Bary4>& nodes)
      : dim_(dim), q_(q), n_(static_cast<int>(nodes.size())) {
    if (n_ != simplex_size(dim, q))
      throw UnsupportedError("node count does not match degree");
    Eigen::MatrixXd V(n_, n_);
    std::vector<double> psi;
    for (int j = 0; j < n_; ++j) {
      pkd_basis(dim_, q_, nodes[j].data(), psi);
      for (int m = 0; m < n_; ++m) V(j, m) = psi[m];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
    const auto& sv = svd.singularValues();
    condition_ = sv(0) / sv(sv.size() - 1);
    coeff_ = V.partialPivLu().inverse();
  }

  int dim() const { return dim_; }
  int degree() const { return q_; }
  int size() const { return n_; }
  /** 2-norm condition number of the Vandermonde matrix. */
  double condition() const { return condition_; }

  void values(const double* lam, double* out) const {
    std::vector<double> psi;
    pkd_basis(dim_, q_, lam, psi);
    Eigen::Map<const Eigen::VectorXd> p(psi.data(), n_);
    Eigen::Map<Eigen::VectorXd> o(out, n_);
    o.noalias() = coeff_.transpose() * p;
  }

  /** Values and gradients; grad is n x dim, row-major. */
  void gradients(const double* lam, double* val, double* grad) const {
    using D = Dual<3>;
    std::array<D, 4> l;
    for (int i = 1; i <= dim_; ++i) l[i] = D::variable(lam[i], i - 1);
    l[0] = D(1.0);
    for (int i = 1; i <= dim_; ++i) l[0] = l[0] - l[i];
    std::vector<D> psi;
    pkd_basis(dim_, q_, l.data(), psi);
    for (int j = 0; j < n_; ++j) {
      double v = 0.0;
      std::array<double, 3> g{};
      for (int m = 0; m < n_; ++m) {
        const double c = coeff_(m, j);
        v += c * psi[m].v;
        for (int d = 0; d < dim_; ++d) g[d] += c * psi[m].d[d];
      }
      if (val) val[j] = v;
      for (int d = 0; d < dim_; ++d) grad[j * dim_ + d] = g[d];
    }
  }

 private:
  int dim_ = 0, q_ = 0, n_ = 0;
  double condition_ = 1.0;
  Eigen::MatrixXd coeff_;
};

/** n-point Gauss-Legendre rule on [-1, 1]. */
inline void gauss_legendre(int n, std::vector<double>& x,
                           std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 2.0);
  if (n == 1) return;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k - 1, k) = J(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    double v = es.eigenvectors()(0, i);
    w[i] = 2.0 * v * v;
  }
}

/** Gauss-Lobatto-Legendre abscissae (q + 1 points, ascending) on [-1, 1]. */
inline std::vector<double> gauss_lobatto(int q) {
  std::vector<double> x(q + 1);
  x[0] = -1.0;
  x[q] = 1.0;
  const int m = q - 1;
  if (m > 0) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) {
      double b = std::sqrt(k * (k + 2.0) / ((2.0 * k + 1.0) * (2.0 * k + 3.0)));
      J(k - 1, k) = J(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    for (int i = 0; i < m; ++i) x[i + 1] = es.eigenvalues()(i);
  }
  // Symmetrize against eigen-solver round-off.
  for (int i = 0; i <= q / 2; ++i) {
    double s = 0.5 * (x[q - i] - x[i]);
    x[i] = -s;
    x[q - i] = s;
  }
  if (q % 2 == 0) x[q / 2] = 0.0;
  return x;
}

struct Quadrature {
  std::vector<Bary4> points;
  std::vector<double> weights;  // sum to 1
};

/** Collapsed Gauss-Legendre rule exact for the given polynomial degree. */
inline Quadrature simplex_quadrature(int dim, int degree) {
  const int n = std::max(1, (degree + dim) / 2 + 1);
  std::vector<double> gx, gw;
  gauss_legendre(n, gx, gw);
  for (auto& v : gx) v = 0.5 * (v + 1.0);
  for (auto& v : gw) v *= 0.5;
  Quadrature q;
  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      q.points.push_back({1.0 - gx[i], gx[i], 0, 0});
      q.weights.push_back(gw[i]);
    }
  } else if (dim == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double a = gx[i], b = gx[j] * (1.0 - gx[i]);
        q.points.push_back({1.0 - a - b, a, b, 0});
        q.weights.push_back(gw[i] * gw[j] * (1.0 - gx[i]));
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double a = gx[i];
          double b = gx[j] * (1.0 - a);
          double c = gx[k] * (1.0 - a) * (1.0 - gx[j]);
          q.points.push_back({1.0 - a - b - c, a, b, c});
          q.weights.push_back(gw[i] * gw[j] * gw[k] * (1.0 - a) * (1.0 - a) *
                              (1.0 - gx[j]));
        }
  }
  double s = 0.0;
  for (double w : q.weights) s += w;
  for (double& w : q.weights) w /= s;
  return q;
}

}  // namespace subcurve
