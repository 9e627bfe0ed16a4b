// SPDX-License-Identifier: Apache-2.0
#ifndef STFEM_PROBLEMS_HPP
#define STFEM_PROBLEMS_HPP

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "stfem/fe_space.hpp"

namespace stfem {

using SpaceTimeScalar = std::function<double(double, double, double)>;
using SpaceTimeGradient = std::function<Point(double, double, double)>;

/// u(x, t) = amplitude(t) * shape(x). Lets error evaluation cache the spatial
/// factor at quadrature points.
struct SeparableSolution {
  std::function<double(double)> amplitude;
  std::function<double(double)> amplitude_rate;  // d/dt amplitude
  SpatialFunction shape;
};

/// Exact solution of a wave problem and the data that produces it.
/// The (x1, x2, t) argument order is used throughout.
struct WaveProblem {
  std::string id;
  SpaceTimeScalar exact_u;
  SpaceTimeScalar exact_dtu;
  SpaceTimeGradient exact_grad;
  SpaceTimeGradient exact_dtu_grad;
  SpaceTimeScalar rhs_f;
  SpatialFunction u0;
  SpatialFunction u1;
  double final_time = 1.0;
  std::optional<SeparableSolution> separable;

  /// f(., t) as a spatial function.
  SpatialFunction rhs_at(double t) const;
};

/// u = sin(4 pi t) x1 (x1 - 1) x2 (x2 - 1).
WaveProblem problem_poly();
/// u = sin(4 pi t) sin(2 pi x1) sin(2 pi x2).
WaveProblem problem_trig();
/// f = 0, u = cos(sqrt(2) pi t) sin(pi x1) sin(pi x2).
WaveProblem problem_energy();

/// Lookup by id: "poly", "trig" or "energy".
WaveProblem problem_by_id(std::string_view id);

}  // namespace stfem

#endif  // STFEM_PROBLEMS_HPP
