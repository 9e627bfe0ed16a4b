// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "stfem/error.hpp"
#include "stfem/fe_space.hpp"

using namespace stfem;
using std::numbers::pi;

namespace {

// Full-lattice 1D matrices on [0, 1] with n cells of degree r, from
// product-formula Lagrange polynomials and a 10-point Gauss rule.
void matrices_1d(int n, int r, oracle::Dense& mass, oracle::Dense& stiff) {
  std::vector<double> nodes;
  for (int j = 0; j <= r; ++j) nodes.push_back(static_cast<double>(j) / r);
  const Rule1D g = gauss_rule(10);
  const double h = 1.0 / n;
  const int side = r * n + 1;
  mass = oracle::Dense::Zero(side, side);
  stiff = oracle::Dense::Zero(side, side);
  for (int c = 0; c < n; ++c) {
    for (int a = 0; a <= r; ++a) {
      for (int b = 0; b <= r; ++b) {
        double m = 0.0, k = 0.0;
        for (std::size_t q = 0; q < g.size(); ++q) {
          const double xi = 0.5 * (g.nodes[q] + 1.0);
          const double w = 0.5 * g.weights[q];
          m += w * h * oracle::lagrange(nodes, a, xi) * oracle::lagrange(nodes, b, xi);
          k += w / h * oracle::lagrange_derivative(nodes, a, xi) *
               oracle::lagrange_derivative(nodes, b, xi);
        }
        mass(c * r + a, c * r + b) += m;
        stiff(c * r + a, c * r + b) += k;
      }
    }
  }
}

oracle::Dense kron(const oracle::Dense& a, const oracle::Dense& b) {
  oracle::Dense out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

SpatialFunction sin_pi() {
  return {[](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); },
          [](double x, double y) {
            return Point{pi * std::cos(pi * x) * std::sin(pi * y),
                         pi * std::sin(pi * x) * std::cos(pi * y)};
          }};
}

// The finite element function with the given coefficients, as a SpatialFunction.
SpatialFunction fe_function(const FeSpace& space, const Vector& c) {
  return {[&space, c](double x, double y) { return space.evaluate(c, x, y); },
          [&space, c](double x, double y) { return space.evaluate_gradient(c, x, y); }};
}

}  // namespace

TEST_CASE("unit square meshes") {
  const Mesh m0 = unit_square_mesh(0);
  CHECK(m0.cells_per_side == 2);
  CHECK(m0.cell_count() == 4);
  CHECK(m0.vertex_count() == 9);
  CHECK(m0.diameter() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  const Mesh m1 = unit_square_mesh(1);
  CHECK(m1.cell_count() == 16);
  CHECK(m1.diameter() == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-15));
  CHECK(unit_square_mesh(3).cell_count() == 256);
  CHECK_THROWS_AS(unit_square_mesh(-1), InvalidArgument);
}

TEST_CASE("space dimensions") {
  const FeSpace q2(unit_square_mesh(0), 2);
  CHECK(q2.lattice_size() == 25);
  CHECK(q2.interior_count() == 9);
  const FeSpace q1(unit_square_mesh(0), 1);
  CHECK(q1.lattice_size() == 9);
  CHECK(q1.interior_count() == 1);
  const FeSpace q3(unit_square_mesh(0), 3);
  CHECK(q3.lattice_size() == 49);
  CHECK(q3.interior_count() == 25);
  for (int level = 0; level <= 2; ++level) {
    for (int r = 1; r <= 4; ++r) {
      const FeSpace s(unit_square_mesh(level), r);
      const int n = s.mesh().cells_per_side;
      CHECK(s.interior_count() == (r * n - 1) * (r * n - 1));
      CHECK(s.mass().rows() == s.interior_count());
    }
  }
  CHECK_THROWS_AS(FeSpace(unit_square_mesh(0), 0), InvalidArgument);
}

TEST_CASE("lattice numbering") {
  const FeSpace s(unit_square_mesh(1), 2);
  int interior = 0;
  for (int l = 0; l < s.lattice_size(); ++l) {
    const Point p = s.lattice_point(l);
    const bool boundary = p[0] == 0.0 || p[0] == 1.0 || p[1] == 0.0 || p[1] == 1.0;
    if (boundary) {
      CHECK(s.interior_index(l) == -1);
    } else {
      CHECK(s.interior_index(l) == interior);
      CHECK(s.lattice_index(interior) == l);
      ++interior;
    }
  }
  CHECK(s.lattice_point(1)[0] == doctest::Approx(1.0 / 8.0));
  CHECK(s.lattice_point(s.lattice_side())[1] == doctest::Approx(1.0 / 8.0));
  int dofs[9];
  s.cell_dofs(1, 2, dofs);
  CHECK(dofs[0] == 2 + 4 * s.lattice_side());
  CHECK(dofs[1] == dofs[0] + 1);
  CHECK(dofs[3] == dofs[0] + s.lattice_side());
}

TEST_CASE("q1 matrix entries") {
  for (int level = 0; level <= 2; ++level) {
    const FeSpace s(unit_square_mesh(level), 1);
    const double hc = s.mesh().cell_size;
    const SparseMatrix m = assemble_mass(s, true);
    const SparseMatrix a = assemble_stiffness(s, true);
    const int centre = s.lattice_index(0);
    CHECK(m.coeff(centre, centre) == doctest::Approx(4.0 * hc * hc / 9.0).epsilon(1e-14));
    CHECK(a.coeff(centre, centre) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    CHECK(s.stiffness().coeff(0, 0) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("full matrices equal the tensor products of 1D matrices") {
  for (int level = 0; level <= 1; ++level) {
    for (int r = 1; r <= 3; ++r) {
      CAPTURE(level);
      CAPTURE(r);
      const FeSpace s(unit_square_mesh(level), r);
      oracle::Dense m1, k1;
      matrices_1d(s.mesh().cells_per_side, r, m1, k1);
      const oracle::Dense m2 = kron(m1, m1);
      const oracle::Dense k2 = kron(k1, m1) + kron(m1, k1);
      const double em = (assemble_mass(s, true).to_dense() - m2).cwiseAbs().maxCoeff();
      const double ek = (assemble_stiffness(s, true).to_dense() - k2).cwiseAbs().maxCoeff();
      CHECK(em <= 1e-15);
      CHECK(ek <= 1e-12);
    }
  }
}

TEST_CASE("matrix invariants") {
  for (int r = 1; r <= 3; ++r) {
    const FeSpace s(unit_square_mesh(1), r);
    const SparseMatrix mf = assemble_mass(s, true);
    const SparseMatrix af = assemble_stiffness(s, true);
    CHECK(mf.sum() == doctest::Approx(1.0).epsilon(1e-13));
    const Vector row_sums = af.multiply(Vector::Ones(s.lattice_size()));
    CHECK(row_sums.cwiseAbs().maxCoeff() <= 1e-12);

    CHECK(s.mass().max_asymmetry() <= 1e-14);
    CHECK(s.stiffness().max_asymmetry() <= 1e-14);
    for (unsigned seed = 0; seed < 5; ++seed) {
      const Vector v = oracle::random_vector(s.interior_count(), seed);
      CHECK(v.dot(s.mass().multiply(v)) > 0.0);
      CHECK(v.dot(s.stiffness().multiply(v)) > 0.0);
    }
    CHECK(assemble_mass(s) == s.mass());
    CHECK(assemble_stiffness(s) == s.stiffness());
  }
}

TEST_CASE("load vectors") {
  const FeSpace q1(unit_square_mesh(0), 1);
  const Vector one = assemble_load(q1, {[](double, double) { return 1.0; }, {}});
  CHECK(one.size() == 1);
  CHECK(one(0) == doctest::Approx(0.25).epsilon(1e-14));

  const FeSpace q2(unit_square_mesh(1), 2);
  const Vector zero = assemble_load(q2, {[](double, double) { return 0.0; }, {}});
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

  // A member of V_h: the load equals M times its coefficients.
  const Vector y = oracle::random_vector(q2.interior_count(), 4);
  const Vector b = assemble_load(q2, fe_function(q2, y));
  CHECK(oracle::rel_diff(b, q2.mass().multiply(y)) <= 1e-12);
}

TEST_CASE("load consistency with the interpolant converges") {
  // ||P_h(g - I_h g)|| computed from b - M I_h g.
  const SpatialFunction g{[](double x, double y) {
                            return std::sin(2 * pi * x) * std::sin(2 * pi * y);
                          },
                          {}};
  for (int r = 1; r <= 2; ++r) {
    std::vector<double> err;
    for (int level = 0; level <= 3; ++level) {
      const FeSpace s(unit_square_mesh(level), r);
      const Vector d = assemble_load(s, g) - s.mass().multiply(s.interpolate(g));
      const Vector x = cg_solve(s.mass(), d).x;
      err.push_back(std::sqrt(x.dot(s.mass().multiply(x))));
    }
    CAPTURE(r);
    const double rate = std::log2(err[2] / err[3]);
    CHECK(rate >= r + 1 - 0.3);
  }
}

TEST_CASE("projections reproduce V_h members") {
  for (int r = 1; r <= 3; ++r) {
    const FeSpace s(unit_square_mesh(1), r);
    const Vector y = oracle::random_vector(s.interior_count(), 10 + r);
    const SpatialFunction f = fe_function(s, y);
    CHECK((l2_project(s, f) - y).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((ritz_project(s, f) - y).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(spatial_l2_norm(s, y, f, r + 1) <= 1e-12);
    CHECK(spatial_h1_seminorm(s, y, f, r + 1) <= 1e-11);
  }
  const FeSpace s(unit_square_mesh(0), 2);
  const SpatialFunction zero{[](double, double) { return 0.0; },
                             [](double, double) { return Point{0.0, 0.0}; }};
  CHECK(l2_project(s, zero).norm() == 0.0);
  CHECK(ritz_project(s, zero).norm() == 0.0);
  CHECK_THROWS_AS(ritz_project(s, {[](double, double) { return 0.0; }, {}}),
                  InvalidArgument);
}

TEST_CASE("ritz projection satisfies galerkin orthogonality") {
  const FeSpace s(unit_square_mesh(1), 3);
  const SpatialFunction g = sin_pi();
  const Vector x = ritz_project(s, g);
  const Vector residual = s.stiffness().multiply(x) - assemble_gradient_load(s, g);
  CHECK(residual.norm() <= 1e-11 * assemble_gradient_load(s, g).norm());
}

TEST_CASE("projection convergence rates") {
  const SpatialFunction g = sin_pi();
  for (int r = 1; r <= 3; ++r) {
    std::vector<double> l2, h1;
    for (int level = 0; level <= 3; ++level) {
      const FeSpace s(unit_square_mesh(level), r);
      l2.push_back(spatial_l2_norm(s, l2_project(s, g), g, r + 3));
      h1.push_back(spatial_h1_seminorm(s, ritz_project(s, g), g, r + 3));
    }
    CAPTURE(r);
    CHECK(std::log2(l2[2] / l2[3]) == doctest::Approx(r + 1).epsilon(0.1));
    CHECK(std::log2(h1[2] / h1[3]) == doctest::Approx(r).epsilon(0.1));
  }
}

TEST_CASE("spatial norms") {
  const FeSpace s(unit_square_mesh(0), 2);
  const Vector zero = Vector::Zero(s.interior_count());
  CHECK(spatial_l2_norm(s, zero, sin_pi(), 5) == doctest::Approx(0.5).epsilon(1e-4));
  const FeSpace fine(unit_square_mesh(2), 2);
  CHECK(spatial_l2_norm(fine, Vector::Zero(fine.interior_count()), sin_pi(), 5) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(spatial_l2_norm(s, zero, {}, 3) == 0.0);
  CHECK(spatial_h1_seminorm(s, zero, {}, 3) == 0.0);
  // ||grad sin sin||^2 = pi^2 / 2
  CHECK(spatial_h1_seminorm(fine, Vector::Zero(fine.interior_count()), sin_pi(), 6) ==
        doctest::Approx(pi / std::sqrt(2.0)).epsilon(1e-10));
  CHECK_THROWS_AS(spatial_l2_norm(s, zero, sin_pi(), 2), InvalidArgument);
  CHECK_THROWS_AS(spatial_l2_norm(s, Vector::Zero(3), sin_pi(), 4), InvalidArgument);
}

TEST_CASE("evaluation and interpolation") {
  const FeSpace s(unit_square_mesh(1), 3);
  const Vector y = oracle::random_vector(s.interior_count(), 2);
  for (int i = 0; i < s.interior_count(); i += 7) {
    const Point p = s.lattice_point(s.lattice_index(i));
    CHECK(s.evaluate(y, p[0], p[1]) == doctest::Approx(y(i)).epsilon(1e-13));
  }
  CHECK(s.evaluate(y, 0.0, 0.3) == 0.0);
  CHECK((s.interpolate(fe_function(s, y)) - y).cwiseAbs().maxCoeff() <= 1e-13);

  // gradient against central differences at an off-lattice point
  const double x = 0.37, z = 0.61, h = 1e-6;
  const Point grad = s.evaluate_gradient(y, x, z);
  CHECK(grad[0] == doctest::Approx((s.evaluate(y, x + h, z) - s.evaluate(y, x - h, z)) /
                                   (2 * h)).epsilon(1e-6));
  CHECK(grad[1] == doctest::Approx((s.evaluate(y, x, z + h) - s.evaluate(y, x, z - h)) /
                                   (2 * h)).epsilon(1e-6));
}
