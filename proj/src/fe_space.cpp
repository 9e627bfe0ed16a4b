// SPDX-License-Identifier: Apache-2.0
#include "stfem/fe_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stfem/error.hpp"

namespace stfem {
namespace {

std::vector<double> equispaced_reference_nodes(int r) {
  std::vector<double> nodes(r + 1);
  for (int j = 0; j <= r; ++j) nodes[j] = -1.0 + 2.0 * j / r;
  return nodes;
}

// Shape values and derivatives (d/dxi on [0,1]) at the points of a unit rule.
struct Tables1D {
  int n_shapes = 0;
  std::vector<double> phi;   // [q * n_shapes + a]
  std::vector<double> dphi;  // [q * n_shapes + a]
  UnitRule rule;

  Tables1D(const NodalBasis& basis, UnitRule r) : rule(std::move(r)) {
    n_shapes = static_cast<int>(basis.size());
    const std::size_t nq = rule.points.size();
    phi.resize(nq * n_shapes);
    dphi.resize(nq * n_shapes);
    for (std::size_t q = 0; q < nq; ++q) {
      const double x = 2.0 * rule.points[q] - 1.0;
      for (int a = 0; a < n_shapes; ++a) {
        phi[q * n_shapes + a] = basis.value(a, x);
        dphi[q * n_shapes + a] = 2.0 * basis.derivative(a, x);
      }
    }
  }
  double v(std::size_t q, int a) const { return phi[q * n_shapes + a]; }
  double d(std::size_t q, int a) const { return dphi[q * n_shapes + a]; }
};

// Element matrix on a cell of size hc, local index a + (r+1) b.
Eigen::MatrixXd element_matrix(const FeSpace& space, bool stiffness) {
  const int r = space.degree();
  const int nl = (r + 1) * (r + 1);
  const double hc = space.mesh().cell_size;
  const Tables1D t(space.shape_1d(), unit_gauss_rule(r + 1));
  const std::size_t nq = t.rule.points.size();
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(nl, nl);
  for (std::size_t qy = 0; qy < nq; ++qy) {
    for (std::size_t qx = 0; qx < nq; ++qx) {
      const double w = t.rule.weights[qx] * t.rule.weights[qy];
      for (int i = 0; i < nl; ++i) {
        const int a = i % (r + 1), b = i / (r + 1);
        for (int j = 0; j < nl; ++j) {
          const int c = j % (r + 1), d = j / (r + 1);
          double val;
          if (stiffness) {
            // Gradients scale by 1/hc, the measure by hc^2.
            val = t.d(qx, a) * t.v(qy, b) * t.d(qx, c) * t.v(qy, d) +
                  t.v(qx, a) * t.d(qy, b) * t.v(qx, c) * t.d(qy, d);
          } else {
            val = hc * hc * t.v(qx, a) * t.v(qy, b) * t.v(qx, c) * t.v(qy, d);
          }
          e(i, j) += w * val;
        }
      }
    }
  }
  return e;
}

SparseMatrix assemble_matrix(const FeSpace& space, bool stiffness,
                             bool include_boundary) {
  const int r = space.degree();
  const int nl = (r + 1) * (r + 1);
  const int n = space.mesh().cells_per_side;
  const Eigen::MatrixXd e = element_matrix(space, stiffness);
  const std::int64_t dim =
      include_boundary ? space.lattice_size() : space.interior_count();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(space.mesh().cell_count()) * nl * nl);
  std::vector<int> dofs(nl), rows(nl);
  for (int cy = 0; cy < n; ++cy) {
    for (int cx = 0; cx < n; ++cx) {
      space.cell_dofs(cx, cy, dofs);
      for (int i = 0; i < nl; ++i) {
        rows[i] = include_boundary ? dofs[i] : space.interior_index(dofs[i]);
      }
      for (int i = 0; i < nl; ++i) {
        if (rows[i] < 0) continue;
        for (int j = 0; j < nl; ++j) {
          if (rows[j] < 0) continue;
          t.push_back({rows[i], rows[j], e(i, j)});
        }
      }
    }
  }
  return SparseMatrix::from_triplets(dim, dim, std::move(t));
}

// Loops over all cells and quadrature points, handing the physical point,
// the weight (including the cell measure) and the local dof list.
template <typename Fn>
void for_each_quadrature_point(const FeSpace& space, const Tables1D& t,
                               Fn&& fn) {
  const int n = space.mesh().cells_per_side;
  const double hc = space.mesh().cell_size;
  const int nl = (space.degree() + 1) * (space.degree() + 1);
  const std::size_t nq = t.rule.points.size();
  std::vector<int> dofs(nl);
  for (int cy = 0; cy < n; ++cy) {
    for (int cx = 0; cx < n; ++cx) {
      space.cell_dofs(cx, cy, dofs);
      for (std::size_t qy = 0; qy < nq; ++qy) {
        for (std::size_t qx = 0; qx < nq; ++qx) {
          const double x1 = (cx + t.rule.points[qx]) * hc;
          const double x2 = (cy + t.rule.points[qy]) * hc;
          const double w = t.rule.weights[qx] * t.rule.weights[qy] * hc * hc;
          fn(std::span<const int>(dofs), qx, qy, x1, x2, w);
        }
      }
    }
  }
}

// Value and gradient of u_h at a quadrature point from local coefficients.
struct LocalEval {
  double value;
  double dx;
  double dy;
};

LocalEval eval_local(const FeSpace& space, const Tables1D& t,
                     std::span<const int> dofs, const Vector& coeffs,
                     std::size_t qx, std::size_t qy) {
  const int r = space.degree();
  const double inv_h = 1.0 / space.mesh().cell_size;
  LocalEval out{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const int k = space.interior_index(dofs[i]);
    if (k < 0) continue;
    const int a = static_cast<int>(i) % (r + 1), b = static_cast<int>(i) / (r + 1);
    const double c = coeffs[k];
    out.value += c * t.v(qx, a) * t.v(qy, b);
    out.dx += c * t.d(qx, a) * t.v(qy, b) * inv_h;
    out.dy += c * t.v(qx, a) * t.d(qy, b) * inv_h;
  }
  return out;
}

void check_coeffs(const FeSpace& space, const Vector& coeffs) {
  if (coeffs.size() != space.interior_count()) {
    throw InvalidArgument("coefficient vector has size " +
                          std::to_string(coeffs.size()) + ", expected " +
                          std::to_string(space.interior_count()));
  }
}

}  // namespace

double Mesh::diameter() const { return std::sqrt(2.0) * cell_size; }

Mesh unit_square_mesh(int level) {
  if (level < 0 || level > 24) {
    throw InvalidArgument("unit_square_mesh: level out of range: " +
                          std::to_string(level));
  }
  Mesh m;
  m.level = level;
  m.cells_per_side = 1 << (level + 1);
  m.cell_size = 1.0 / m.cells_per_side;
  return m;
}

UnitRule unit_gauss_rule(int points) {
  const Rule1D g = gauss_rule(points);
  UnitRule u;
  for (std::size_t q = 0; q < g.size(); ++q) {
    u.points.push_back(0.5 * (g.nodes[q] + 1.0));
    u.weights.push_back(0.5 * g.weights[q]);
  }
  return u;
}

FeSpace::FeSpace(Mesh mesh, int degree)
    : mesh_(mesh),
      degree_(degree),
      side_(degree * mesh.cells_per_side + 1),
      shape_(degree >= 1 ? equispaced_reference_nodes(degree)
                         : std::vector<double>{0.0}) {
  if (degree < 1) {
    throw InvalidArgument("FeSpace: degree must be >= 1, got " +
                          std::to_string(degree));
  }
  if (mesh.cells_per_side < 1) {
    throw InvalidArgument("FeSpace: mesh needs at least one cell");
  }
  interior_.assign(lattice_size(), -1);
  for (int iy = 1; iy + 1 < side_; ++iy) {
    for (int ix = 1; ix + 1 < side_; ++ix) {
      const int l = iy * side_ + ix;
      interior_[l] = n_interior_++;
      lattice_of_.push_back(l);
    }
  }
  mass_ = assemble_mass(*this);
  stiffness_ = assemble_stiffness(*this);
}

Point FeSpace::lattice_point(int lattice_index) const {
  const double d = 1.0 / (side_ - 1);
  return {(lattice_index % side_) * d, (lattice_index / side_) * d};
}

void FeSpace::cell_dofs(int cx, int cy, std::span<int> out) const {
  const int r = degree_;
  for (int b = 0; b <= r; ++b) {
    for (int a = 0; a <= r; ++a) {
      out[a + (r + 1) * b] = (cy * r + b) * side_ + cx * r + a;
    }
  }
}

double FeSpace::shape(int j, double xi) const {
  return shape_.value(j, 2.0 * xi - 1.0);
}

double FeSpace::shape_deriv(int j, double xi) const {
  return 2.0 * shape_.derivative(j, 2.0 * xi - 1.0);
}

void FeSpace::locate(double x, int& cell, double& xi) const {
  const int n = mesh_.cells_per_side;
  cell = std::clamp(static_cast<int>(std::floor(x * n)), 0, n - 1);
  xi = x * n - cell;
}

double FeSpace::evaluate(const Vector& coeffs, double x1, double x2) const {
  check_coeffs(*this, coeffs);
  int cx, cy;
  double xi, eta;
  locate(x1, cx, xi);
  locate(x2, cy, eta);
  double s = 0.0;
  for (int b = 0; b <= degree_; ++b) {
    for (int a = 0; a <= degree_; ++a) {
      const int k = interior_[(cy * degree_ + b) * side_ + cx * degree_ + a];
      if (k >= 0) s += coeffs[k] * shape(a, xi) * shape(b, eta);
    }
  }
  return s;
}

Point FeSpace::evaluate_gradient(const Vector& coeffs, double x1,
                                 double x2) const {
  check_coeffs(*this, coeffs);
  int cx, cy;
  double xi, eta;
  locate(x1, cx, xi);
  locate(x2, cy, eta);
  const double inv_h = 1.0 / mesh_.cell_size;
  Point g{0.0, 0.0};
  for (int b = 0; b <= degree_; ++b) {
    for (int a = 0; a <= degree_; ++a) {
      const int k = interior_[(cy * degree_ + b) * side_ + cx * degree_ + a];
      if (k < 0) continue;
      g[0] += coeffs[k] * shape_deriv(a, xi) * shape(b, eta) * inv_h;
      g[1] += coeffs[k] * shape(a, xi) * shape_deriv(b, eta) * inv_h;
    }
  }
  return g;
}

Vector FeSpace::interpolate(const SpatialFunction& g) const {
  Vector v(n_interior_);
  for (int i = 0; i < n_interior_; ++i) {
    const Point p = lattice_point(lattice_of_[i]);
    v[i] = g.value(p[0], p[1]);
  }
  return v;
}

SparseMatrix assemble_mass(const FeSpace& space, bool include_boundary) {
  return assemble_matrix(space, false, include_boundary);
}

SparseMatrix assemble_stiffness(const FeSpace& space, bool include_boundary) {
  return assemble_matrix(space, true, include_boundary);
}

Vector assemble_load(const FeSpace& space, const SpatialFunction& g) {
  const int r = space.degree();
  const Tables1D t(space.shape_1d(), unit_gauss_rule(r + 2));
  Vector b = Vector::Zero(space.interior_count());
  for_each_quadrature_point(
      space, t,
      [&](std::span<const int> dofs, std::size_t qx, std::size_t qy, double x1,
          double x2, double w) {
        const double gw = w * g.value(x1, x2);
        if (gw == 0.0) return;
        for (std::size_t i = 0; i < dofs.size(); ++i) {
          const int k = space.interior_index(dofs[i]);
          if (k < 0) continue;
          const int a = static_cast<int>(i) % (r + 1);
          const int c = static_cast<int>(i) / (r + 1);
          b[k] += gw * t.v(qx, a) * t.v(qy, c);
        }
      });
  return b;
}

Vector assemble_gradient_load(const FeSpace& space, const SpatialFunction& g) {
  if (!g.gradient) {
    throw InvalidArgument("gradient load requires a gradient");
  }
  const int r = space.degree();
  const double inv_h = 1.0 / space.mesh().cell_size;
  const Tables1D t(space.shape_1d(), unit_gauss_rule(r + 2));
  Vector c = Vector::Zero(space.interior_count());
  for_each_quadrature_point(
      space, t,
      [&](std::span<const int> dofs, std::size_t qx, std::size_t qy, double x1,
          double x2, double w) {
        const Point grad = g.gradient(x1, x2);
        for (std::size_t i = 0; i < dofs.size(); ++i) {
          const int k = space.interior_index(dofs[i]);
          if (k < 0) continue;
          const int a = static_cast<int>(i) % (r + 1);
          const int b = static_cast<int>(i) / (r + 1);
          c[k] += w * inv_h *
                  (grad[0] * t.d(qx, a) * t.v(qy, b) +
                   grad[1] * t.v(qx, a) * t.d(qy, b));
        }
      });
  return c;
}

Vector l2_project(const FeSpace& space, const SpatialFunction& g, double tol,
                  int max_iter) {
  return cg_solve(space.mass(), assemble_load(space, g), tol, max_iter).x;
}

Vector ritz_project(const FeSpace& space, const SpatialFunction& g, double tol,
                    int max_iter) {
  if (!g.gradient) {
    throw InvalidArgument("ritz_project: function has no gradient");
  }
  return cg_solve(space.stiffness(), assemble_gradient_load(space, g), tol,
                  max_iter)
      .x;
}

double spatial_l2_norm(const FeSpace& space, const Vector& coeffs,
                       const SpatialFunction& reference, int quad_pts) {
  check_coeffs(space, coeffs);
  if (quad_pts < space.degree() + 1) {
    throw InvalidArgument("spatial_l2_norm: need at least r+1 points");
  }
  const Tables1D t(space.shape_1d(), unit_gauss_rule(quad_pts));
  double sum = 0.0;
  for_each_quadrature_point(
      space, t,
      [&](std::span<const int> dofs, std::size_t qx, std::size_t qy, double x1,
          double x2, double w) {
        const double e = eval_local(space, t, dofs, coeffs, qx, qy).value -
                         (reference.value ? reference.value(x1, x2) : 0.0);
        sum += w * e * e;
      });
  return std::sqrt(sum);
}

double spatial_h1_seminorm(const FeSpace& space, const Vector& coeffs,
                           const SpatialFunction& reference, int quad_pts) {
  check_coeffs(space, coeffs);
  if (quad_pts < space.degree() + 1) {
    throw InvalidArgument("spatial_h1_seminorm: need at least r+1 points");
  }
  const Tables1D t(space.shape_1d(), unit_gauss_rule(quad_pts));
  double sum = 0.0;
  for_each_quadrature_point(
      space, t,
      [&](std::span<const int> dofs, std::size_t qx, std::size_t qy, double x1,
          double x2, double w) {
        const LocalEval u = eval_local(space, t, dofs, coeffs, qx, qy);
        const Point g =
            reference.gradient ? reference.gradient(x1, x2) : Point{0.0, 0.0};
        const double ex = u.dx - g[0], ey = u.dy - g[1];
        sum += w * (ex * ex + ey * ey);
      });
  return std::sqrt(sum);
}

}  // namespace stfem
