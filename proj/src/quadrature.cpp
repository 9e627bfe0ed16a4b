// SPDX-License-Identifier: Apache-2.0
#include "stfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stfem/error.hpp"

namespace stfem {
namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;

// Mirror the computed nodes so that the rule is exactly symmetric about 0.
void symmetrize(Rule1D& rule) {
  const std::size_t m = rule.size();
  for (std::size_t i = 0; i < m / 2; ++i) {
    const std::size_t j = m - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
}

// Second derivative of P_n from the Legendre ODE; only used away from +-1.
double legendre_second_derivative(int n, double x, const LegendreValue& p) {
  return (2.0 * x * p.derivative - n * (n + 1.0) * p.value) / (1.0 - x * x);
}

}  // namespace

LegendreValue legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = x;
  for (int j = 1; j < n; ++j) {
    const double p_next = ((2.0 * j + 1.0) * x * p - j * p_prev) / (j + 1.0);
    p_prev = p;
    p = p_next;
  }
  double dp;
  if (std::abs(x) == 1.0) {
    dp = 0.5 * n * (n + 1.0) * ((n % 2 == 0) ? x : 1.0);
  } else {
    dp = n * (x * p - p_prev) / (x * x - 1.0);
  }
  return {p, dp};
}

Rule1D gauss_rule(int m) {
  if (m < 1) {
    throw InvalidArgument("gauss_rule: need at least 1 point, got " +
                          std::to_string(m));
  }
  Rule1D rule;
  switch (m) {
    case 1:
      rule = {{0.0}, {2.0}};
      break;
    case 2: {
      const double x = 1.0 / std::sqrt(3.0);
      rule = {{-x, x}, {1.0, 1.0}};
      break;
    }
    case 3: {
      const double x = std::sqrt(3.0 / 5.0);
      rule = {{-x, 0.0, x}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
      break;
    }
    case 4: {
      const double s = 2.0 / 7.0 * std::sqrt(6.0 / 5.0);
      const double xi = std::sqrt(3.0 / 7.0 - s);
      const double xo = std::sqrt(3.0 / 7.0 + s);
      const double wi = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wo = (18.0 - std::sqrt(30.0)) / 36.0;
      rule = {{-xo, -xi, xi, xo}, {wo, wi, wi, wo}};
      break;
    }
    default: {
      rule.nodes.resize(m);
      rule.weights.resize(m);
      for (int i = 0; i < m; ++i) {
        double x = -std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * m));
        for (int it = 0; it < kNewtonMaxIter; ++it) {
          const LegendreValue p = legendre(m, x);
          const double dx = p.value / p.derivative;
          x -= dx;
          if (std::abs(dx) <= kNewtonTol) break;
        }
        const double dp = legendre(m, x).derivative;
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
      }
      symmetrize(rule);
    }
  }
  return rule;
}

Rule1D gauss_lobatto_rule(int m) {
  if (m < 2) {
    throw InvalidArgument("gauss_lobatto_rule: need at least 2 points, got " +
                          std::to_string(m));
  }
  Rule1D rule;
  switch (m) {
    case 2:
      rule = {{-1.0, 1.0}, {1.0, 1.0}};
      break;
    case 3:
      rule = {{-1.0, 0.0, 1.0}, {1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0}};
      break;
    case 4: {
      const double x = 1.0 / std::sqrt(5.0);
      rule = {{-1.0, -x, x, 1.0}, {1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0}};
      break;
    }
    default: {
      // Interior nodes are the roots of P'_{m-1}.
      const int n = m - 1;
      rule.nodes.resize(m);
      rule.weights.resize(m);
      rule.nodes.front() = -1.0;
      rule.nodes.back() = 1.0;
      for (int i = 1; i < n; ++i) {
        double x = -std::cos(std::numbers::pi * i / n);
        for (int it = 0; it < kNewtonMaxIter; ++it) {
          const LegendreValue p = legendre(n, x);
          const double dx =
              p.derivative / legendre_second_derivative(n, x, p);
          x -= dx;
          if (std::abs(dx) <= kNewtonTol) break;
        }
        rule.nodes[i] = x;
      }
      for (int i = 0; i < m; ++i) {
        const double p = legendre(n, rule.nodes[i]).value;
        rule.weights[i] = 2.0 / (n * (n + 1.0) * p * p);
      }
      symmetrize(rule);
    }
  }
  return rule;
}

NodalBasis::NodalBasis(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  const std::size_t m = nodes_.size();
  if (m == 0) throw InvalidArgument("nodal_basis: empty node set");
  bary_.assign(m, 1.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      if (i == j) continue;
      const double d = nodes_[j] - nodes_[i];
      if (d == 0.0) {
        throw InvalidArgument("nodal_basis: duplicate node " +
                              std::to_string(nodes_[j]));
      }
      bary_[j] /= d;
    }
  }
  diff_ = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      diff_(i, j) = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
      diag -= diff_(i, j);
    }
    diff_(i, i) = diag;
  }
}

double NodalBasis::value(std::size_t j, double x) const {
  if (x == nodes_[j]) return 1.0;
  double p = bary_[j];
  for (std::size_t m = 0; m < nodes_.size(); ++m) {
    if (m != j) p *= x - nodes_[m];
  }
  return p;
}

double NodalBasis::derivative(std::size_t j, double x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i == j) continue;
    double p = 1.0;
    for (std::size_t m = 0; m < nodes_.size(); ++m) {
      if (m != j && m != i) p *= x - nodes_[m];
    }
    sum += p;
  }
  return bary_[j] * sum;
}

void NodalBasis::values(double x, std::span<double> out) const {
  for (std::size_t j = 0; j < size(); ++j) out[j] = value(j, x);
}

void NodalBasis::derivatives(double x, std::span<double> out) const {
  for (std::size_t j = 0; j < size(); ++j) out[j] = derivative(j, x);
}

NodalBasis nodal_basis(std::span<const double> nodes) {
  return NodalBasis(std::vector<double>(nodes.begin(), nodes.end()));
}

Vector eval_lagrange(const NodalBasis& basis, std::span<const Vector> coeffs,
                     double x) {
  if (coeffs.size() != basis.size()) {
    throw InvalidArgument("eval_lagrange: expected " +
                          std::to_string(basis.size()) + " coefficients, got " +
                          std::to_string(coeffs.size()));
  }
  Vector out = Vector::Zero(coeffs.front().size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j].size() != out.size()) {
      throw InvalidArgument("eval_lagrange: coefficient vectors differ in size");
    }
    out += basis.value(j, x) * coeffs[j];
  }
  return out;
}

}  // namespace stfem
