// SPDX-License-Identifier: Apache-2.0
#ifndef STFEM_QUADRATURE_HPP
#define STFEM_QUADRATURE_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace stfem {

using Vector = Eigen::VectorXd;

/// Quadrature rule on the reference interval [-1, 1].
struct Rule1D {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive, summing to 2

  std::size_t size() const { return nodes.size(); }
};

/// m-point Gauss-Lobatto rule (both endpoints included), exact up to degree 2m-3.
Rule1D gauss_lobatto_rule(int m);

/// m-point Gauss-Legendre rule, exact up to degree 2m-1.
Rule1D gauss_rule(int m);

/// Legendre polynomial P_n and its derivative at x.
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre(int n, double x);

/// Lagrange (cardinal) basis on a set of distinct nodes.
///
/// diff_matrix()(i, j) holds L_j'(node_i). Values and derivatives at
/// arbitrary points are evaluated from the product form.
class NodalBasis {
 public:
  explicit NodalBasis(std::vector<double> nodes);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const Eigen::MatrixXd& diff_matrix() const { return diff_; }

  double value(std::size_t j, double x) const;
  double derivative(std::size_t j, double x) const;

  /// All basis values (resp. derivatives) at x, written to out[0..size).
  void values(double x, std::span<double> out) const;
  void derivatives(double x, std::span<double> out) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> bary_;  // barycentric weights 1 / prod_{m!=j}(x_j - x_m)
  Eigen::MatrixXd diff_;
};

NodalBasis nodal_basis(std::span<const double> nodes);

/// sum_j coeffs[j] * L_j(x).
Vector eval_lagrange(const NodalBasis& basis, std::span<const Vector> coeffs,
                     double x);

}  // namespace stfem

#endif  // STFEM_QUADRATURE_HPP
