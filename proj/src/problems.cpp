// SPDX-License-Identifier: Apache-2.0
#include "stfem/problems.hpp"

#include <cmath>
#include <numbers>

#include "stfem/error.hpp"

namespace stfem {
namespace {

constexpr double pi = std::numbers::pi;

// Fill exact_u, exact_dtu and the gradients from a separable form.
void attach_separable(WaveProblem& p, SeparableSolution s) {
  p.exact_u = [s](double x1, double x2, double t) {
    return s.amplitude(t) * s.shape.value(x1, x2);
  };
  p.exact_dtu = [s](double x1, double x2, double t) {
    return s.amplitude_rate(t) * s.shape.value(x1, x2);
  };
  p.exact_grad = [s](double x1, double x2, double t) {
    const Point g = s.shape.gradient(x1, x2);
    const double a = s.amplitude(t);
    return Point{a * g[0], a * g[1]};
  };
  p.exact_dtu_grad = [s](double x1, double x2, double t) {
    const Point g = s.shape.gradient(x1, x2);
    const double a = s.amplitude_rate(t);
    return Point{a * g[0], a * g[1]};
  };
  p.u0 = {[s](double x1, double x2) { return s.amplitude(0.0) * s.shape.value(x1, x2); },
          [s](double x1, double x2) {
            const Point g = s.shape.gradient(x1, x2);
            const double a = s.amplitude(0.0);
            return Point{a * g[0], a * g[1]};
          }};
  p.u1 = {[s](double x1, double x2) {
            return s.amplitude_rate(0.0) * s.shape.value(x1, x2);
          },
          [s](double x1, double x2) {
            const Point g = s.shape.gradient(x1, x2);
            const double a = s.amplitude_rate(0.0);
            return Point{a * g[0], a * g[1]};
          }};
  p.separable = std::move(s);
}

}  // namespace

SpatialFunction WaveProblem::rhs_at(double t) const {
  return {[f = rhs_f, t](double x1, double x2) { return f(x1, x2, t); }, {}};
}

WaveProblem problem_poly() {
  WaveProblem p;
  p.id = "poly";
  SeparableSolution s;
  s.amplitude = [](double t) { return std::sin(4.0 * pi * t); };
  s.amplitude_rate = [](double t) { return 4.0 * pi * std::cos(4.0 * pi * t); };
  s.shape.value = [](double x1, double x2) {
    return x1 * (x1 - 1.0) * x2 * (x2 - 1.0);
  };
  s.shape.gradient = [](double x1, double x2) {
    return Point{(2.0 * x1 - 1.0) * x2 * (x2 - 1.0),
                 x1 * (x1 - 1.0) * (2.0 * x2 - 1.0)};
  };
  attach_separable(p, std::move(s));
  p.rhs_f = [](double x1, double x2, double t) {
    const double a = x1 * (x1 - 1.0);
    const double b = x2 * (x2 - 1.0);
    return -std::sin(4.0 * pi * t) *
           (16.0 * pi * pi * a * b + 2.0 * a + 2.0 * b);
  };
  return p;
}

WaveProblem problem_trig() {
  WaveProblem p;
  p.id = "trig";
  SeparableSolution s;
  s.amplitude = [](double t) { return std::sin(4.0 * pi * t); };
  s.amplitude_rate = [](double t) { return 4.0 * pi * std::cos(4.0 * pi * t); };
  s.shape.value = [](double x1, double x2) {
    return std::sin(2.0 * pi * x1) * std::sin(2.0 * pi * x2);
  };
  s.shape.gradient = [](double x1, double x2) {
    return Point{2.0 * pi * std::cos(2.0 * pi * x1) * std::sin(2.0 * pi * x2),
                 2.0 * pi * std::sin(2.0 * pi * x1) * std::cos(2.0 * pi * x2)};
  };
  attach_separable(p, std::move(s));
  p.rhs_f = [](double x1, double x2, double t) {
    return -8.0 * pi * pi * std::sin(4.0 * pi * t) * std::sin(2.0 * pi * x1) *
           std::sin(2.0 * pi * x2);
  };
  return p;
}

WaveProblem problem_energy() {
  WaveProblem p;
  p.id = "energy";
  const double omega = std::sqrt(2.0) * pi;
  SeparableSolution s;
  s.amplitude = [omega](double t) { return std::cos(omega * t); };
  s.amplitude_rate = [omega](double t) { return -omega * std::sin(omega * t); };
  s.shape.value = [](double x1, double x2) {
    return std::sin(pi * x1) * std::sin(pi * x2);
  };
  s.shape.gradient = [](double x1, double x2) {
    return Point{pi * std::cos(pi * x1) * std::sin(pi * x2),
                 pi * std::sin(pi * x1) * std::cos(pi * x2)};
  };
  attach_separable(p, std::move(s));
  p.rhs_f = [](double, double, double) { return 0.0; };
  return p;
}

WaveProblem problem_by_id(std::string_view id) {
  if (id == "poly") return problem_poly();
  if (id == "trig") return problem_trig();
  if (id == "energy") return problem_energy();
  throw InvalidArgument("unknown problem id '" + std::string(id) +
                        "' (expected poly, trig or energy)");
}

}  // namespace stfem
