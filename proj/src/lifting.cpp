// SPDX-License-Identifier: Apache-2.0
#include "stfem/lifting.hpp"

#include "stfem/error.hpp"

namespace stfem {

ThetaPoly::ThetaPoly(const TimePartition& partition, int n)
    : n_(n),
      t_start_(partition.start(n)),
      t_end_(partition.end(n)),
      tau_(partition.tau(n)),
      nodes_(partition.lobatto().nodes) {
  // (2 / tau) * scale * prod_{mu >= 1} (-1 - x_mu) = 1.
  double prod = 1.0;
  for (std::size_t mu = 1; mu < nodes_.size(); ++mu) prod *= -1.0 - nodes_[mu];
  scale_ = 0.5 * tau_ / prod;
}

double ThetaPoly::reference_value(double x) const {
  double p = scale_;
  for (double node : nodes_) p *= x - node;
  return p;
}

double ThetaPoly::reference_derivative(double x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    double p = 1.0;
    for (std::size_t m = 0; m < nodes_.size(); ++m) {
      if (m != i) p *= x - nodes_[m];
    }
    sum += p;
  }
  return scale_ * sum;
}

double ThetaPoly::value(double t) const {
  return reference_value((2.0 * t - t_start_ - t_end_) / (t_end_ - t_start_));
}

double ThetaPoly::derivative(double t) const {
  return 2.0 / tau_ *
         reference_derivative((2.0 * t - t_start_ - t_end_) / (t_end_ - t_start_));
}

ThetaPoly build_theta(const TimePartition& partition, int n) {
  if (n < 1 || n > partition.slab_count()) {
    throw RangeError("build_theta: slab " + std::to_string(n) + " out of range");
  }
  return ThetaPoly(partition, n);
}

StatePair initial_derivative(const MolSystem& system) {
  const Vector rhs =
      system.load(0.0) - system.stiffness.multiply(system.initial[0]);
  return {system.initial[1],
          cg_solve(system.mass, rhs, system.cg_tol, system.cg_max_iter).x};
}

LiftedTrajectory::LiftedTrajectory(SlabTrajectory base, StatePair init_deriv)
    : base_(std::move(base)), init_deriv_(std::move(init_deriv)) {
  if (!base_.complete()) {
    throw InvalidArgument("lift: trajectory is incomplete");
  }
  const TimePartition& p = base_.partition();
  StatePair incoming = init_deriv_;
  for (int n = 1; n <= p.slab_count(); ++n) {
    ThetaPoly theta(p, n);
    const StatePair right = derivative_on_slab(base_, n, p.start(n));
    StatePair c{right[0] - incoming[0], right[1] - incoming[1]};
    const StatePair left = derivative_on_slab(base_, n, p.end(n));
    const double theta_end = theta.derivative(p.end(n));
    incoming = {left[0] - theta_end * c[0], left[1] - theta_end * c[1]};
    jumps_.push_back(std::move(c));
    thetas_.push_back(std::move(theta));
  }
}

LiftedTrajectory lift(SlabTrajectory traj, StatePair init_deriv) {
  return LiftedTrajectory(std::move(traj), std::move(init_deriv));
}

LiftedTrajectory lift(SlabTrajectory traj, const MolSystem& system) {
  return LiftedTrajectory(std::move(traj), initial_derivative(system));
}

StatePair lifted_eval_on_slab(const LiftedTrajectory& lifted, int n, double t) {
  StatePair v = evaluate_on_slab(lifted.base(), n, t);
  const double th = lifted.theta(n).value(t);
  const StatePair& c = lifted.jump(n);
  v[0] -= th * c[0];
  v[1] -= th * c[1];
  return v;
}

StatePair lifted_deriv_on_slab(const LiftedTrajectory& lifted, int n,
                               double t) {
  StatePair d = derivative_on_slab(lifted.base(), n, t);
  const double th = lifted.theta(n).derivative(t);
  const StatePair& c = lifted.jump(n);
  d[0] -= th * c[0];
  d[1] -= th * c[1];
  return d;
}

StatePair lifted_eval(const LiftedTrajectory& lifted, double t) {
  return lifted_eval_on_slab(lifted, lifted.partition().slab_of(t), t);
}

StatePair lifted_deriv_eval(const LiftedTrajectory& lifted, double t) {
  const int n = lifted.partition().slab_of(t);
  if (t == lifted.partition().start(1)) return lifted.initial_derivative();
  return lifted_deriv_on_slab(lifted, n, t);
}

}  // namespace stfem
