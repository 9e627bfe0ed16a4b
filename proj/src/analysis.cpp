// SPDX-License-Identifier: Apache-2.0
#include "stfem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stfem/error.hpp"

namespace stfem {
namespace {

// Squared spatial error integrals at one time instant.
struct InstantError {
  double l2_u0 = 0.0;    // ||e0||^2
  double h1_u0 = 0.0;    // ||grad e0||^2
  double l2_u1 = 0.0;    // ||e1||^2
};

// Values of finite element functions at all spatial quadrature points,
// cell-major, then (qy, qx) with qx fastest.
class SpatialSampler {
 public:
  SpatialSampler(const FeSpace& space, int quad_pts)
      : space_(space), rule_(unit_gauss_rule(quad_pts)) {
    const int r = space.degree();
    const int n = space.mesh().cells_per_side;
    const double hc = space.mesh().cell_size;
    nq_ = static_cast<int>(rule_.points.size());
    phi_.resize(nq_, r + 1);
    dphi_.resize(nq_, r + 1);
    for (int q = 0; q < nq_; ++q) {
      const double x = 2.0 * rule_.points[q] - 1.0;
      for (int a = 0; a <= r; ++a) {
        phi_(q, a) = space.shape_1d().value(a, x);
        dphi_(q, a) = 2.0 * space.shape_1d().derivative(a, x) / hc;
      }
    }
    const Eigen::Index npts = static_cast<Eigen::Index>(n) * n * nq_ * nq_;
    x1_.resize(npts);
    x2_.resize(npts);
    weights_.resize(npts);
    Eigen::Index p = 0;
    for (int cy = 0; cy < n; ++cy) {
      for (int cx = 0; cx < n; ++cx) {
        for (int qy = 0; qy < nq_; ++qy) {
          for (int qx = 0; qx < nq_; ++qx, ++p) {
            x1_[p] = (cx + rule_.points[qx]) * hc;
            x2_[p] = (cy + rule_.points[qy]) * hc;
            weights_[p] = rule_.weights[qx] * rule_.weights[qy] * hc * hc;
          }
        }
      }
    }
  }

  Eigen::Index size() const { return weights_.size(); }
  const Eigen::ArrayXd& weights() const { return weights_; }
  double x1(Eigen::Index p) const { return x1_[p]; }
  double x2(Eigen::Index p) const { return x2_[p]; }

  // Values (and optionally gradients) of coeffs at all points, by sum
  // factorization over the tensor-product cell basis.
  void sample(const Vector& coeffs, Eigen::Ref<Eigen::VectorXd> val,
              Eigen::VectorXd* gx, Eigen::VectorXd* gy) const {
    const int r = space_.degree();
    const int n = space_.mesh().cells_per_side;
    const int nl = (r + 1) * (r + 1);
    std::vector<int> dofs(nl);
    Eigen::MatrixXd local(r + 1, r + 1);  // local(a, b)
    Eigen::MatrixXd tmp, dtmp;
    Eigen::Index p = 0;
    for (int cy = 0; cy < n; ++cy) {
      for (int cx = 0; cx < n; ++cx) {
        space_.cell_dofs(cx, cy, dofs);
        for (int i = 0; i < nl; ++i) {
          const int k = space_.interior_index(dofs[i]);
          local(i % (r + 1), i / (r + 1)) = k >= 0 ? coeffs[k] : 0.0;
        }
        tmp.noalias() = phi_ * local;    // (qx, b)
        dtmp.noalias() = dphi_ * local;  // (qx, b)
        for (int qy = 0; qy < nq_; ++qy) {
          for (int qx = 0; qx < nq_; ++qx, ++p) {
            val[p] = tmp.row(qx).dot(phi_.row(qy));
            if (gx) (*gx)[p] = dtmp.row(qx).dot(phi_.row(qy));
            if (gy) (*gy)[p] = tmp.row(qx).dot(dphi_.row(qy));
          }
        }
      }
    }
  }

 private:
  const FeSpace& space_;
  UnitRule rule_;
  int nq_ = 0;
  Eigen::MatrixXd phi_, dphi_;
  Eigen::ArrayXd x1_, x2_, weights_;
};

// Error evaluation for one solution against one reference field.
class ErrorEvaluator {
 public:
  ErrorEvaluator(const TrajectoryView& solution, const FeSpace& space,
                 const SpaceTimeField& exact, int quad_pts)
      : sol_(solution), exact_(exact), sampler_(space, quad_pts) {
    const TimePartition& p = solution.partition();
    if (solution.base().completed_slabs() != p.slab_count()) {
      throw InvalidArgument("error evaluation needs a complete trajectory");
    }
    if (solution.base().slab(0, 1).front().size() != space.interior_count()) {
      throw InvalidArgument("trajectory does not match the finite element space");
    }
    const Eigen::Index np = sampler_.size();
    if (exact.separable) {
      shape_.resize(np);
      shape_gx_.resize(np);
      shape_gy_.resize(np);
      for (Eigen::Index i = 0; i < np; ++i) {
        shape_[i] = exact.separable->shape.value(sampler_.x1(i), sampler_.x2(i));
        const Point g =
            exact.separable->shape.gradient(sampler_.x1(i), sampler_.x2(i));
        shape_gx_[i] = g[0];
        shape_gy_[i] = g[1];
      }
    } else if (!exact.u || !exact.dtu || !exact.grad) {
      throw InvalidArgument("reference field needs u, d_t u and grad u");
    }
    ex_u_.resize(np);
    ex_v_.resize(np);
    ex_gx_.resize(np);
    ex_gy_.resize(np);
  }

  void load_slab(int n) {
    const int k = sol_.partition().degree();
    const Eigen::Index np = sampler_.size();
    const int m = k + 2;
    v0_.setZero(np, m);
    g0x_.setZero(np, m);
    g0y_.setZero(np, m);
    v1_.setZero(np, m);
    const auto u0 = sol_.base().slab(0, n);
    const auto u1 = sol_.base().slab(1, n);
    Eigen::VectorXd gx(np), gy(np);
    for (int mu = 0; mu <= k; ++mu) {
      sampler_.sample(u0[mu], v0_.col(mu), &gx, &gy);
      g0x_.col(mu) = gx;
      g0y_.col(mu) = gy;
      sampler_.sample(u1[mu], v1_.col(mu), nullptr, nullptr);
    }
    if (sol_.is_lifted()) {
      const StatePair& c = sol_.lifted()->jump(n);
      sampler_.sample(c[0], v0_.col(k + 1), &gx, &gy);
      g0x_.col(k + 1) = gx;
      g0y_.col(k + 1) = gy;
      sampler_.sample(c[1], v1_.col(k + 1), nullptr, nullptr);
    }
    slab_ = n;
  }

  // Error at physical time t given as reference coordinate x on the loaded slab.
  InstantError at(double t, double x) {
    const TimePartition& p = sol_.partition();
    const int k = p.degree();
    Eigen::VectorXd c(k + 2);
    for (int mu = 0; mu <= k; ++mu) c[mu] = p.basis().value(mu, x);
    c[k + 1] = sol_.is_lifted()
                   ? -sol_.lifted()->theta(slab_).reference_value(x)
                   : 0.0;
    const Eigen::ArrayXd uh0 = (v0_ * c).array();
    const Eigen::ArrayXd uh0x = (g0x_ * c).array();
    const Eigen::ArrayXd uh0y = (g0y_ * c).array();
    const Eigen::ArrayXd uh1 = (v1_ * c).array();

    if (exact_.separable) {
      const double a = exact_.separable->amplitude(t);
      const double ad = exact_.separable->amplitude_rate(t);
      ex_u_ = a * shape_;
      ex_v_ = ad * shape_;
      ex_gx_ = a * shape_gx_;
      ex_gy_ = a * shape_gy_;
    } else {
      for (Eigen::Index i = 0; i < sampler_.size(); ++i) {
        const double x1 = sampler_.x1(i), x2 = sampler_.x2(i);
        ex_u_[i] = exact_.u(x1, x2, t);
        ex_v_[i] = exact_.dtu(x1, x2, t);
        const Point g = exact_.grad(x1, x2, t);
        ex_gx_[i] = g[0];
        ex_gy_[i] = g[1];
      }
    }
    const Eigen::ArrayXd& w = sampler_.weights();
    InstantError e;
    e.l2_u0 = (w * (ex_u_ - uh0).square()).sum();
    e.h1_u0 = (w * ((ex_gx_ - uh0x).square() + (ex_gy_ - uh0y).square())).sum();
    e.l2_u1 = (w * (ex_v_ - uh1).square()).sum();
    return e;
  }

 private:
  const TrajectoryView& sol_;
  const SpaceTimeField& exact_;
  SpatialSampler sampler_;
  Eigen::ArrayXd shape_, shape_gx_, shape_gy_;
  Eigen::ArrayXd ex_u_, ex_v_, ex_gx_, ex_gy_;
  Eigen::MatrixXd v0_, g0x_, g0y_, v1_;
  int slab_ = 0;
};

struct Maxima {
  double l2_u0 = 0.0, l2_u1 = 0.0, energy = 0.0;
  void update(const InstantError& e) {
    l2_u0 = std::max(l2_u0, e.l2_u0);
    l2_u1 = std::max(l2_u1, e.l2_u1);
    energy = std::max(energy, e.h1_u0 + e.l2_u1);
  }
};

Maxima sweep_linf(ErrorEvaluator& ev, const TimePartition& p, int samples) {
  if (samples < 1) throw InvalidArgument("samples_per_slab must be >= 1");
  Maxima m;
  for (int n = 1; n <= p.slab_count(); ++n) {
    ev.load_slab(n);
    const double tau = p.end(n) - p.start(n);
    for (int j = 0; j < samples; ++j) {
      const double t = p.start(n) + j * tau / samples;
      m.update(ev.at(t, -1.0 + 2.0 * j / samples));
    }
    if (n == p.slab_count()) m.update(ev.at(p.end(n), 1.0));
  }
  return m;
}

InstantError sweep_l2(ErrorEvaluator& ev, const TimePartition& p, int points) {
  if (points < p.degree() + 2) {
    throw InvalidArgument("time_quad_pts must be >= k+2, got " +
                          std::to_string(points));
  }
  const Rule1D g = gauss_rule(points);
  InstantError total;
  for (int n = 1; n <= p.slab_count(); ++n) {
    ev.load_slab(n);
    const double mid = 0.5 * (p.start(n) + p.end(n));
    const double half = 0.5 * (p.end(n) - p.start(n));
    for (std::size_t q = 0; q < g.size(); ++q) {
      const InstantError e = ev.at(mid + half * g.nodes[q], g.nodes[q]);
      const double w = half * g.weights[q];
      total.l2_u0 += w * e.l2_u0;
      total.h1_u0 += w * e.h1_u0;
      total.l2_u1 += w * e.l2_u1;
    }
  }
  return total;
}

int space_points(const FeSpace& space, int requested) {
  return requested > 0 ? requested : space.degree() + 3;
}

}  // namespace

SpaceTimeField exact_field(const WaveProblem& problem) {
  return {problem.exact_u, problem.exact_dtu, problem.exact_grad,
          problem.separable};
}

StatePair TrajectoryView::value(double t) const {
  return lifted_ ? lifted_eval(*lifted_, t) : evaluate(*base_, t);
}

ErrorNorms error_norms(const TrajectoryView& solution, const FeSpace& space,
                       const SpaceTimeField& exact, const ErrorOptions& opts) {
  const TimePartition& p = solution.partition();
  ErrorEvaluator ev(solution, space, exact,
                    space_points(space, opts.space_quad_pts));
  const Maxima m = sweep_linf(ev, p, opts.samples_per_slab);
  const InstantError l2 = sweep_l2(
      ev, p, opts.time_quad_pts > 0 ? opts.time_quad_pts : p.degree() + 3);
  ErrorNorms out;
  out.e0_linf = std::sqrt(m.l2_u0);
  out.e1_linf = std::sqrt(m.l2_u1);
  out.energy_linf = std::sqrt(m.energy);
  out.e0_l2 = std::sqrt(l2.l2_u0);
  out.e1_l2 = std::sqrt(l2.l2_u1);
  out.energy_l2 = std::sqrt(l2.h1_u0 + l2.l2_u1);
  return out;
}

std::pair<double, double> linf_l2_error(const TrajectoryView& solution,
                                        const FeSpace& space,
                                        const SpaceTimeField& exact,
                                        int samples_per_slab) {
  ErrorEvaluator ev(solution, space, exact, space_points(space, -1));
  const Maxima m = sweep_linf(ev, solution.partition(), samples_per_slab);
  return {std::sqrt(m.l2_u0), std::sqrt(m.l2_u1)};
}

std::pair<double, double> l2_l2_error(const TrajectoryView& solution,
                                      const FeSpace& space,
                                      const SpaceTimeField& exact,
                                      int time_quad_pts) {
  ErrorEvaluator ev(solution, space, exact, space_points(space, -1));
  const InstantError e = sweep_l2(ev, solution.partition(), time_quad_pts);
  return {std::sqrt(e.l2_u0), std::sqrt(e.l2_u1)};
}

double energy_error(const TrajectoryView& solution, const FeSpace& space,
                    const SpaceTimeField& exact, EnergyNorm mode,
                    int sampling) {
  ErrorEvaluator ev(solution, space, exact, space_points(space, -1));
  if (mode == EnergyNorm::linf) {
    return std::sqrt(sweep_linf(ev, solution.partition(), sampling).energy);
  }
  const InstantError e = sweep_l2(ev, solution.partition(), sampling);
  return std::sqrt(e.h1_u0 + e.l2_u1);
}

double discrete_energy(const StatePair& state, const MolSystem& system) {
  return state[1].dot(system.mass.multiply(state[1])) +
         state[0].dot(system.stiffness.multiply(state[0]));
}

double discrete_energy(const SlabTrajectory& traj, const MolSystem& system,
                       int n) {
  return discrete_energy(traj.at_grid(n), system);
}

std::vector<double> eoc(std::span<const double> errors, double ratio) {
  std::vector<double> out;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i - 1] > 0.0 && errors[i] > 0.0) {
      out.push_back(std::log(errors[i - 1] / errors[i]) / std::log(ratio));
    } else {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

}  // namespace stfem
