// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "stfem/analysis.hpp"
#include "stfem/cgp.hpp"
#include "stfem/error.hpp"

using namespace stfem;
using std::numbers::pi;

namespace {

MolSystem algebraic(const oracle::Dense& m, const oracle::Dense& a,
                    std::function<Vector(double)> load, StatePair init) {
  MolSystem s;
  s.mass = SparseMatrix::from_dense(m);
  s.stiffness = SparseMatrix::from_dense(a);
  s.load = std::move(load);
  s.initial = std::move(init);
  return s;
}

std::shared_ptr<const FeSpace> space(int level, int r) {
  return std::make_shared<const FeSpace>(unit_square_mesh(level), r);
}

// Exact solution U0 = p(t) v + q(t) w, U1 = U0' with p, q of degree k, and
// the load b = M U1' + A U0 that produces it.
struct PolynomialCase {
  int k;
  Vector v, w;
  std::vector<double> pc, qc;  // monomial coefficients

  static double poly(const std::vector<double>& c, double t, int deriv) {
    double s = 0.0;
    for (std::size_t i = deriv; i < c.size(); ++i) {
      double f = 1.0;
      for (int d = 0; d < deriv; ++d) f *= static_cast<double>(i - d);
      s += f * c[i] * std::pow(t, static_cast<double>(i - deriv));
    }
    return s;
  }
  Vector u0(double t) const { return poly(pc, t, 0) * v + poly(qc, t, 0) * w; }
  Vector u1(double t) const { return poly(pc, t, 1) * v + poly(qc, t, 1) * w; }
  Vector u1_dot(double t) const { return poly(pc, t, 2) * v + poly(qc, t, 2) * w; }
};

PolynomialCase polynomial_case(int k, Eigen::Index n) {
  PolynomialCase c{k, oracle::random_vector(n, 1), oracle::random_vector(n, 2), {}, {}};
  for (int i = 0; i <= k; ++i) {
    c.pc.push_back(1.0 / (1.0 + i));
    c.qc.push_back(i % 2 == 0 ? -0.5 * i : 0.8);
  }
  return c;
}

}  // namespace

TEST_CASE("time partition") {
  const TimePartition p = TimePartition::uniform(1.0, 10, 2);
  CHECK(p.slab_count() == 10);
  CHECK(p.is_uniform());
  CHECK(p.tau(3) == 0.1);
  CHECK(p.final_time() == 1.0);
  for (int n = 1; n <= 10; ++n) {
    CHECK(p.node(n, 0) == p.start(n));
    CHECK(p.node(n, 2) == p.end(n));
    CHECK(p.node(n, 1) == doctest::Approx(0.5 * (p.start(n) + p.end(n))));
    if (n > 1) CHECK(p.node(n, 0) == p.node(n - 1, 2));
  }
  CHECK(p.slab_of(0.0) == 1);
  CHECK(p.slab_of(p.end(1)) == 1);
  CHECK(p.slab_of(std::nextafter(p.end(1), 1.0)) == 2);
  CHECK(p.slab_of(1.0) == 10);
  CHECK_THROWS_AS(p.slab_of(-1e-12), RangeError);
  CHECK_THROWS_AS(p.slab_of(1.0 + 1e-12), RangeError);
  CHECK(p.to_reference(4, p.start(4)) == -1.0);
  CHECK(p.to_reference(4, p.end(4)) == 1.0);

  const TimePartition q({0.0, 0.1, 0.35, 0.4}, 3);
  CHECK_FALSE(q.is_uniform());
  CHECK(q.tau(2) == doctest::Approx(0.25));
  CHECK(q.node(2, 3) == 0.35);
  CHECK_THROWS_AS(TimePartition({0.0, 0.2, 0.2}, 2), InvalidArgument);
  CHECK_THROWS_AS(TimePartition({0.0}, 2), InvalidArgument);
  CHECK_THROWS_AS(TimePartition::uniform(1.0, 4, 0), InvalidArgument);
  CHECK_THROWS_AS(TimePartition::uniform(1.0, 0, 2), InvalidArgument);
}

TEST_CASE("time couplings equal exact reference integrals") {
  for (int k = 1; k <= 5; ++k) {
    CAPTURE(k);
    const TimeCoupling c = time_coupling(k);
    const oracle::SlabIntegrals si = oracle::slab_integrals(k);
    CHECK((c.alpha - si.mass).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((c.time - si.time).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(time_coupling(0), InvalidArgument);
}

TEST_CASE("initial data") {
  const auto s2 = space(0, 2);
  const WaveProblem poly = problem_poly();
  const MolSystem ritz = make_system(s2, poly, InitialMode::ritz);
  const MolSystem interp = make_system(s2, poly, InitialMode::interpolate);
  CHECK(ritz.initial[0].norm() == 0.0);
  CHECK(interp.initial[0].norm() == 0.0);
  // 4 pi x1 (x1-1) x2 (x2-1) is biquadratic
  CHECK((ritz.initial[1] - interp.initial[1]).cwiseAbs().maxCoeff() <= 1e-10);

  const auto s3 = space(1, 3);
  const WaveProblem trig = problem_trig();
  const MolSystem t = make_system(s3, trig, InitialMode::ritz);
  const Vector c = assemble_gradient_load(*s3, trig.u1);
  CHECK((s3->stiffness().multiply(t.initial[1]) - c).norm() <= 1e-11 * c.norm());

  WaveProblem no_grad = problem_trig();
  no_grad.u1.gradient = nullptr;
  CHECK_THROWS_AS(make_system(s3, no_grad, InitialMode::ritz), InvalidArgument);
  CHECK_NOTHROW(make_system(s3, no_grad, InitialMode::interpolate));
  CHECK(t.load(0.3).size() == s3->interior_count());
}

TEST_CASE("stationary velocity with A = 0 and f = 0") {
  const Eigen::Index n = 4;
  const oracle::Dense m = oracle::random_spd(n, 8);
  const Vector u = oracle::random_vector(n, 1), v = oracle::random_vector(n, 2);
  const MolSystem sys = algebraic(m, oracle::Dense::Zero(n, n),
                                  [n](double) { return Vector::Zero(n); }, {u, v});
  for (int k = 1; k <= 4; ++k) {
    CAPTURE(k);
    const TimePartition p = TimePartition::uniform(1.0, 5, k);
    const SlabTrajectory traj = integrate(sys, p);
    for (int s = 1; s <= 5; ++s) {
      for (int mu = 0; mu <= k; ++mu) {
        const double t = p.node(s, mu);
        CHECK(oracle::rel_diff(traj.slab(1, s)[mu], v) <= 1e-12);
        CHECK(oracle::rel_diff(traj.slab(0, s)[mu], u + t * v) <= 1e-12);
      }
      const double mid = 0.37 * p.start(s) + 0.63 * p.end(s);
      CHECK(oracle::rel_diff(evaluate(traj, mid)[0], u + mid * v) <= 1e-12);
    }
  }
}

TEST_CASE("scalar oscillator conserves the discrete energy per step") {
  const double omega = 3.0;
  oracle::Dense m(1, 1), a(1, 1);
  m << 1.0;
  a << omega * omega;
  const MolSystem sys = algebraic(m, a, [](double) { return Vector::Zero(1); },
                                  {Vector::Constant(1, 0.4), Vector::Constant(1, -1.3)});
  const TimePartition p = TimePartition::uniform(2.0, 17, 2);
  const SlabTrajectory traj = integrate(sys, p);
  auto energy = [&](int n) {
    const StatePair s = traj.at_grid(n);
    return s[1](0) * s[1](0) + omega * omega * s[0](0) * s[0](0);
  };
  for (int n = 1; n <= 17; ++n) {
    CHECK(std::abs(energy(n) - energy(n - 1)) <= 1e-12 * energy(0));
  }
}

TEST_CASE("polynomial solutions are reproduced exactly") {
  const auto sp = space(0, 2);
  const oracle::Dense m = sp->mass().to_dense();
  const oracle::Dense a = sp->stiffness().to_dense();
  for (int k = 1; k <= 4; ++k) {
    CAPTURE(k);
    const PolynomialCase pc = polynomial_case(k, sp->interior_count());
    const MolSystem sys = algebraic(
        m, a, [&](double t) -> Vector { return m * pc.u1_dot(t) + a * pc.u0(t); },
        {pc.u0(0.0), pc.u1(0.0)});
    for (const TimePartition& p :
         {TimePartition::uniform(1.0, 4, k), TimePartition({0.0, 0.15, 0.5, 0.6, 1.0}, k)}) {
      const SlabTrajectory traj = integrate(sys, p);
      double worst = 0.0;
      for (int n = 1; n <= p.slab_count(); ++n) {
        for (int mu = 0; mu <= k; ++mu) {
          const double t = p.node(n, mu);
          worst = std::max({worst, oracle::rel_diff(traj.slab(0, n)[mu], pc.u0(t)),
                            oracle::rel_diff(traj.slab(1, n)[mu], pc.u1(t))});
        }
        const double t = 0.3 * p.start(n) + 0.7 * p.end(n);
        const StatePair d = derivative_on_slab(traj, n, t);
        worst = std::max(worst, oracle::rel_diff(d[0], pc.u1(t)));
      }
      CHECK(worst <= 1e-10);
    }
  }
}

TEST_CASE("block solve equals the dense brute-force solve") {
  const auto sp = space(0, 2);
  const MolSystem sys = make_system(sp, problem_poly(), InitialMode::ritz);
  const TimePartition p = TimePartition::uniform(1.0, 10, 2);
  CHECK(2 * 2 * sys.size() == 36);
  const SlabTrajectory traj = integrate(sys, p);
  // u0 nearly vanishes at some nodes, so errors are relative to the run maximum
  double err[2] = {0.0, 0.0}, scale[2] = {0.0, 0.0};
  for (int n = 1; n <= 10; ++n) {
    const StatePair prev = traj.at_grid(n - 1);
    const SlabValues lib = cgp_step(sys, p, n, prev);
    const SlabValues ref = oracle::brute_force_step(sys, p, n, prev);
    for (int mu = 0; mu < 2; ++mu) {
      err[0] = std::max(err[0], (lib.u0[mu] - ref.u0[mu]).cwiseAbs().maxCoeff());
      err[1] = std::max(err[1], (lib.u1[mu] - ref.u1[mu]).cwiseAbs().maxCoeff());
      scale[0] = std::max(scale[0], ref.u0[mu].cwiseAbs().maxCoeff());
      scale[1] = std::max(scale[1], ref.u1[mu].cwiseAbs().maxCoeff());
    }
  }
  CHECK(err[0] <= 1e-11 * scale[0]);
  CHECK(err[1] <= 1e-11 * scale[1]);
  for (int k : {1, 3}) {
    const TimePartition q({0.0, 0.2, 0.45, 0.5}, k);
    const SlabTrajectory tq = integrate(sys, q);
    for (int n = 1; n <= 3; ++n) {
      const SlabValues ref = oracle::brute_force_step(sys, q, n, tq.at_grid(n - 1));
      CHECK(oracle::rel_diff(tq.slab(0, n)[k], ref.u0[k - 1]) <= 1e-11);
      CHECK(oracle::rel_diff(tq.slab(1, n)[k], ref.u1[k - 1]) <= 1e-11);
    }
  }
}

TEST_CASE("slab residuals vanish") {
  const auto sp = space(1, 2);
  const MolSystem sys = make_system(sp, problem_trig(), InitialMode::ritz);
  for (int k = 1; k <= 3; ++k) {
    const TimePartition p = TimePartition::uniform(1.0, 12, k);
    const SlabTrajectory traj = integrate(sys, p);
    for (int n : {1, 5, 12}) CHECK(slab_residual(sys, traj, n) <= 1e-10);
  }
}

TEST_CASE("integrate bookkeeping") {
  const auto sp = space(0, 2);
  const MolSystem sys = make_system(sp, problem_poly(), InitialMode::ritz);
  const TimePartition one = TimePartition::uniform(0.1, 1, 2);
  const SlabTrajectory traj = integrate(sys, one);
  CHECK(traj.complete());
  const SlabValues step = cgp_step(sys, one, 1, sys.initial);
  CHECK(traj.slab(0, 1)[2] == step.u0[1]);
  CHECK(traj.slab(1, 1)[1] == step.u1[0]);
  CHECK(traj.at_grid(0)[0] == sys.initial[0]);
  CHECK(traj.at_grid(0)[1] == sys.initial[1]);

  const TimePartition p = TimePartition::uniform(1.0, 6, 3);
  const SlabTrajectory t6 = integrate(sys, p);
  for (int n = 2; n <= 6; ++n) {
    for (int c = 0; c < 2; ++c) {
      CHECK(t6.slab(c, n)[0] == t6.slab(c, n - 1)[3]);
      const StatePair left = evaluate_on_slab(t6, n - 1, p.end(n - 1));
      const StatePair right = evaluate_on_slab(t6, n, p.start(n));
      CHECK(left[c] == right[c]);
    }
    double scale = 0.0;
    for (int mu = 0; mu <= 3; ++mu) scale = std::max(scale, t6.slab(0, n)[mu].cwiseAbs().maxCoeff());
    for (int mu = 0; mu <= 3; ++mu) {
      const Vector at_node = evaluate_on_slab(t6, n, p.node(n, mu))[0];
      CHECK((at_node - t6.slab(0, n)[mu]).cwiseAbs().maxCoeff() <= 1e-14 * scale);
    }
  }
  CHECK_THROWS_AS(evaluate(t6, 1.5), RangeError);
  CHECK_THROWS_AS(t6.slab(0, 7), RangeError);

  SlabTrajectory partial(p, sys.initial);
  CHECK_FALSE(partial.complete());
  CHECK_THROWS_AS(partial.slab(0, 1), RangeError);
  CHECK_THROWS_AS(partial.append({sys.initial[0]}, {sys.initial[1]}), InvalidArgument);
}

TEST_CASE("energy is conserved for f = 0") {
  const auto sp = space(1, 2);
  const MolSystem sys = make_system(sp, problem_energy(), InitialMode::ritz);
  const TimePartition p = TimePartition::uniform(1.0, 20, 2);
  const SlabTrajectory traj = integrate(sys, p);
  const double e0 = discrete_energy(traj, sys, 0);
  for (int n = 1; n <= 20; ++n) {
    CHECK(std::abs(discrete_energy(traj, sys, n) - e0) <= 1e-10 * e0);
  }
  // discrete energy approximates the continuous one, pi^2 / 2
  CHECK(e0 == doctest::Approx(pi * pi / 2.0).epsilon(0.02));
}

TEST_CASE("stepper input validation") {
  const auto sp = space(0, 1);
  const MolSystem sys = make_system(sp, problem_poly(), InitialMode::ritz);
  CgpStepper stepper(sys, 2);
  const TimePartition p = TimePartition::uniform(1.0, 4, 2);
  const TimePartition p3 = TimePartition::uniform(1.0, 4, 3);
  CHECK_THROWS_AS(stepper.step(p3, 1, sys.initial), InvalidArgument);
  CHECK_THROWS_AS(stepper.step(p, 5, sys.initial), RangeError);
  CHECK_THROWS_AS(stepper.step(p, 1, {Vector::Zero(3), Vector::Zero(3)}), InvalidArgument);
}
