// SPDX-License-Identifier: Apache-2.0
#ifndef STFEM_LIFTING_HPP
#define STFEM_LIFTING_HPP

#include <vector>

#include "stfem/cgp.hpp"

namespace stfem {

/// Degree-(k+1) slab polynomial vanishing at the k+1 Gauss-Lobatto nodes of
/// slab n, with unit time derivative at t_{n-1}. Stored in product form on
/// the reference interval.
class ThetaPoly {
 public:
  ThetaPoly(const TimePartition& partition, int n);

  int slab() const { return n_; }
  /// Leading factor of the reference product form.
  double scale() const { return scale_; }

  double value(double t) const;
  double derivative(double t) const;
  double reference_value(double x) const;
  double reference_derivative(double x) const;  // d/dx on [-1, 1]

 private:
  int n_;
  double t_start_;
  double t_end_;
  double tau_;
  std::vector<double> nodes_;
  double scale_;
};

ThetaPoly build_theta(const TimePartition& partition, int n);

/// {U1_0, M^{-1}(b(0) - A U0_0)}: derivative of the lifted solution at t = 0.
StatePair initial_derivative(const MolSystem& system);

/// C^1-in-time lifting L w = w - c_{n-1} theta_n of a cGP trajectory.
class LiftedTrajectory {
 public:
  LiftedTrajectory(SlabTrajectory base, StatePair init_deriv);

  const SlabTrajectory& base() const { return base_; }
  const TimePartition& partition() const { return base_.partition(); }
  const StatePair& initial_derivative() const { return init_deriv_; }
  /// Jump pair c_{n-1} scaling theta_n on slab n.
  const StatePair& jump(int n) const { return jumps_.at(n - 1); }
  const ThetaPoly& theta(int n) const { return thetas_.at(n - 1); }

 private:
  SlabTrajectory base_;
  StatePair init_deriv_;
  std::vector<StatePair> jumps_;
  std::vector<ThetaPoly> thetas_;
};

/// Jumps by the forward recursion
///   c_{n-1} = d/dt w|_{I_n}(t_{n-1}) - d/dt L w|_{I_{n-1}}(t_{n-1}),
/// started from the derivative of the lifted solution at t = 0.
LiftedTrajectory lift(SlabTrajectory traj, const MolSystem& system);
LiftedTrajectory lift(SlabTrajectory traj, StatePair init_deriv);

StatePair lifted_eval(const LiftedTrajectory& lifted, double t);
StatePair lifted_deriv_eval(const LiftedTrajectory& lifted, double t);
/// Slab-restricted versions (one-sided limits at the slab ends).
StatePair lifted_eval_on_slab(const LiftedTrajectory& lifted, int n, double t);
StatePair lifted_deriv_on_slab(const LiftedTrajectory& lifted, int n,
                               double t);

}  // namespace stfem

#endif  // STFEM_LIFTING_HPP
