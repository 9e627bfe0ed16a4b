// SPDX-License-Identifier: Apache-2.0
#ifndef STFEM_FE_SPACE_HPP
#define STFEM_FE_SPACE_HPP

#include <array>
#include <functional>
#include <vector>

#include "stfem/linalg.hpp"
#include "stfem/quadrature.hpp"

namespace stfem {

/// Uniform square mesh of the unit square (0,1)^2.
struct Mesh {
  int cells_per_side = 2;
  double cell_size = 0.5;
  int level = 0;

  int cell_count() const { return cells_per_side * cells_per_side; }
  int vertex_count() const {
    return (cells_per_side + 1) * (cells_per_side + 1);
  }
  /// Cell diameter, sqrt(2) * cell_size.
  double diameter() const;
};

/// 2^(level+1) cells per side; level 0 is the 2x2 mesh with h = 1/sqrt(2).
Mesh unit_square_mesh(int level);

using Point = std::array<double, 2>;

struct SpatialFunction {
  std::function<double(double, double)> value;
  std::function<Point(double, double)> gradient;  // may be empty
};

/// Continuous Q_r Lagrange space with homogeneous Dirichlet boundary.
///
/// Degrees of freedom sit on the equispaced (r n + 1)^2 lattice, numbered
/// lexicographically (x1 fastest). Boundary lattice points are eliminated;
/// interior points are renumbered 0..N_int-1 in the same order.
class FeSpace {
 public:
  FeSpace(Mesh mesh, int degree);

  const Mesh& mesh() const { return mesh_; }
  int degree() const { return degree_; }

  /// Lattice points per side, r n + 1.
  int lattice_side() const { return side_; }
  int lattice_size() const { return side_ * side_; }
  int interior_count() const { return n_interior_; }

  Point lattice_point(int lattice_index) const;
  /// Interior number of a lattice point, or -1 on the boundary.
  int interior_index(int lattice_index) const { return interior_[lattice_index]; }
  /// Lattice index of interior dof i.
  int lattice_index(int interior) const { return lattice_of_[interior]; }

  /// Lattice indices of the (r+1)^2 local dofs of cell (cx, cy), x1 fastest.
  void cell_dofs(int cx, int cy, std::span<int> out) const;

  /// 1D reference shape functions on [0, 1] at equispaced nodes j / r.
  const NodalBasis& shape_1d() const { return shape_; }

  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }

  /// Point evaluation of an interior coefficient vector.
  double evaluate(const Vector& coeffs, double x1, double x2) const;
  Point evaluate_gradient(const Vector& coeffs, double x1, double x2) const;

  /// Nodal interpolant on the interior lattice.
  Vector interpolate(const SpatialFunction& g) const;

 private:
  // Local shape values on [0,1]: reference basis lives on [-1,1].
  double shape(int j, double xi) const;
  double shape_deriv(int j, double xi) const;
  void locate(double x, int& cell, double& xi) const;

  Mesh mesh_;
  int degree_;
  int side_;
  int n_interior_ = 0;
  std::vector<int> interior_;
  std::vector<int> lattice_of_;
  NodalBasis shape_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
};

/// Per-cell 1D Gauss points and weights mapped to [0, 1].
struct UnitRule {
  std::vector<double> points;
  std::vector<double> weights;
};
UnitRule unit_gauss_rule(int points);

/// Mass / stiffness matrices with (r+1)^2-point tensor Gauss quadrature.
/// With include_boundary the full lattice matrices are returned.
SparseMatrix assemble_mass(const FeSpace& space, bool include_boundary = false);
SparseMatrix assemble_stiffness(const FeSpace& space,
                                bool include_boundary = false);

/// b_i = int g phi_i over interior test functions, (r+2)^2 Gauss points per cell.
Vector assemble_load(const FeSpace& space, const SpatialFunction& g);

/// c_i = int grad g . grad phi_i, (r+2)^2 Gauss points per cell.
Vector assemble_gradient_load(const FeSpace& space, const SpatialFunction& g);

/// L2 projection P_h: solves M x = b_g.
Vector l2_project(const FeSpace& space, const SpatialFunction& g,
                  double tol = 1e-12, int max_iter = -1);

/// Elliptic (Ritz) projection R_h: solves A x = c_g. g must vanish on the
/// boundary and supply a gradient.
Vector ritz_project(const FeSpace& space, const SpatialFunction& g,
                    double tol = 1e-12, int max_iter = -1);

/// ||u_h - reference||_{L2} with quad_pts^2 Gauss points per cell.
double spatial_l2_norm(const FeSpace& space, const Vector& coeffs,
                       const SpatialFunction& reference, int quad_pts);

/// ||grad(u_h - reference)||_{L2}; reference must supply a gradient.
double spatial_h1_seminorm(const FeSpace& space, const Vector& coeffs,
                           const SpatialFunction& reference, int quad_pts);

}  // namespace stfem

#endif  // STFEM_FE_SPACE_HPP
