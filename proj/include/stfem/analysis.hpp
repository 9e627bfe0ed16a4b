// SPDX-License-Identifier: Apache-2.0
#ifndef STFEM_ANALYSIS_HPP
#define STFEM_ANALYSIS_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "stfem/cgp.hpp"
#include "stfem/lifting.hpp"
#include "stfem/problems.hpp"

namespace stfem {

/// Reference solution {u, d_t u} with the gradient of u.
struct SpaceTimeField {
  SpaceTimeScalar u;
  SpaceTimeScalar dtu;
  SpaceTimeGradient grad;
  std::optional<SeparableSolution> separable;
};

SpaceTimeField exact_field(const WaveProblem& problem);

/// Read-only view of either a cGP trajectory or its lifting, as seen by the
/// error functionals: on slab n the solution is
///   sum_mu L_mu(t) U_mu  -  theta_n(t) c_{n-1}
/// with the second term absent for the plain trajectory.
class TrajectoryView {
 public:
  explicit TrajectoryView(const SlabTrajectory& traj) : base_(&traj) {}
  explicit TrajectoryView(const LiftedTrajectory& lifted)
      : base_(&lifted.base()), lifted_(&lifted) {}

  const TimePartition& partition() const { return base_->partition(); }
  const SlabTrajectory& base() const { return *base_; }
  bool is_lifted() const { return lifted_ != nullptr; }
  const LiftedTrajectory* lifted() const { return lifted_; }

  StatePair value(double t) const;

 private:
  const SlabTrajectory* base_;
  const LiftedTrajectory* lifted_ = nullptr;
};

struct ErrorOptions {
  int samples_per_slab = 1000;
  int time_quad_pts = -1;   // default k + 3
  int space_quad_pts = -1;  // default r + 3
};

/// The six error quantities of one solution.
struct ErrorNorms {
  double e0_linf = 0.0;
  double e1_linf = 0.0;
  double e0_l2 = 0.0;
  double e1_l2 = 0.0;
  double energy_linf = 0.0;
  double energy_l2 = 0.0;
};

/// All six norms in one sweep. L-infinity quantities are maxima over
/// t_{n-1} + j tau_n / S (j = 0..S-1, all n) together with t = T; L2-in-time
/// quantities use a per-slab Gauss rule.
ErrorNorms error_norms(const TrajectoryView& solution, const FeSpace& space,
                       const SpaceTimeField& exact, const ErrorOptions& opts);

/// (||e0||, ||e1||) in L-infinity(L2).
std::pair<double, double> linf_l2_error(const TrajectoryView& solution,
                                        const FeSpace& space,
                                        const SpaceTimeField& exact,
                                        int samples_per_slab);

/// (||e0||, ||e1||) in L2(L2); time_quad_pts must be >= k + 2.
std::pair<double, double> l2_l2_error(const TrajectoryView& solution,
                                      const FeSpace& space,
                                      const SpaceTimeField& exact,
                                      int time_quad_pts);

enum class EnergyNorm { linf, l2 };

/// (||grad e0||^2 + ||e1||^2)^(1/2), maximised over the sampling grid
/// (linf, sampling = samples per slab) or integrated in time (l2,
/// sampling = Gauss points per slab).
double energy_error(const TrajectoryView& solution, const FeSpace& space,
                    const SpaceTimeField& exact, EnergyNorm mode, int sampling);

/// U1^T M U1 + U0^T A U0.
double discrete_energy(const StatePair& state, const MolSystem& system);
double discrete_energy(const SlabTrajectory& traj, const MolSystem& system,
                       int n);

/// log(e_{i-1} / e_i) / log(ratio) for i = 1..size-1; NaN where an error is
/// not positive.
std::vector<double> eoc(std::span<const double> errors, double ratio = 2.0);

}  // namespace stfem

#endif  // STFEM_ANALYSIS_HPP
