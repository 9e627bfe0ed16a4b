// SPDX-License-Identifier: Apache-2.0
#ifndef STFEM_CGP_HPP
#define STFEM_CGP_HPP

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "stfem/fe_space.hpp"
#include "stfem/linalg.hpp"
#include "stfem/problems.hpp"
#include "stfem/quadrature.hpp"

namespace stfem {

/// Coefficient pair {u0, u1} = {displacement, velocity}.
using StatePair = std::array<Vector, 2>;

/// Partition 0 = t_0 < ... < t_N = T with the (k+1) Gauss-Lobatto nodes of
/// each slab I_n = (t_{n-1}, t_n], n = 1..N.
class TimePartition {
 public:
  TimePartition(std::vector<double> grid, int k);
  static TimePartition uniform(double final_time, int steps, int k);

  int degree() const { return k_; }
  int slab_count() const { return static_cast<int>(grid_.size()) - 1; }
  double final_time() const { return grid_.back(); }
  const std::vector<double>& grid() const { return grid_; }
  bool is_uniform() const { return uniform_; }

  double start(int n) const { return grid_[n - 1]; }
  double end(int n) const { return grid_[n]; }
  double tau(int n) const;

  /// t_{n,mu}; mu = 0 and mu = k return the grid points exactly.
  double node(int n, int mu) const;
  /// Reference coordinate of t on slab n.
  double to_reference(int n, double t) const;

  /// Slab containing t: n = 1 for t = 0, otherwise t in (t_{n-1}, t_n].
  /// Throws RangeError outside [0, T].
  int slab_of(double t) const;

  const Rule1D& lobatto() const { return lobatto_; }
  const NodalBasis& basis() const { return basis_; }

 private:
  std::vector<double> grid_;
  int k_;
  bool uniform_ = false;
  double uniform_tau_ = 0.0;
  Rule1D lobatto_;
  NodalBasis basis_;
};

enum class InitialMode { ritz, interpolate };

/// Method-of-lines system M U0' = M U1, M U1' + A U0 = b(t).
struct MolSystem {
  std::shared_ptr<const FeSpace> space;  // null for purely algebraic systems
  SparseMatrix mass;
  SparseMatrix stiffness;
  std::function<Vector(double)> load;
  StatePair initial;
  double cg_tol = 1e-12;
  int cg_max_iter = -1;

  std::int64_t size() const { return mass.rows(); }
};

/// Builds M, A, the load of f(., t) and the discrete initial pair
/// ({R_h u0, R_h u1} in ritz mode, nodal interpolants otherwise).
MolSystem make_system(std::shared_ptr<const FeSpace> space,
                      const WaveProblem& problem, InitialMode mode,
                      double cg_tol = 1e-12, int cg_max_iter = -1);

/// Reference-interval couplings of the cGP(k) slab equations, with test
/// basis the Lagrange polynomials at the k Gauss points:
///   alpha(j, nu) = w_nu psi_j(t_nu)       (Gauss-Lobatto weights/nodes)
///   time(j, mu)  = sum_nu alpha(j, nu) D(nu, mu)
struct TimeCoupling {
  Rule1D lobatto;
  Rule1D gauss;
  Eigen::MatrixXd diff;   // (k+1) x (k+1) Gauss-Lobatto diff matrix
  Eigen::MatrixXd alpha;  // k x (k+1)
  Eigen::MatrixXd time;   // k x (k+1)
};
TimeCoupling time_coupling(int k);

/// Trajectory of nodal vectors. Slab n owns nodes (n-1)k .. nk of a single
/// shared list, so the value at t_{n-1} is stored once.
class SlabTrajectory {
 public:
  SlabTrajectory(TimePartition partition, StatePair initial);

  const TimePartition& partition() const { return partition_; }
  int degree() const { return partition_.degree(); }
  int completed_slabs() const;
  bool complete() const { return completed_slabs() == partition_.slab_count(); }

  /// The k+1 nodal vectors of component c on slab n.
  std::span<const Vector> slab(int component, int n) const;
  /// Value at t_n, n = 0..N.
  StatePair at_grid(int n) const;

  /// Appends the values at t_{n,1..k} of the next slab.
  void append(std::vector<Vector> u0, std::vector<Vector> u1);

 private:
  TimePartition partition_;
  std::array<std::vector<Vector>, 2> nodes_;
};

struct SlabValues {
  std::vector<Vector> u0;  // t_{n,1} .. t_{n,k}
  std::vector<Vector> u1;
};

/// Solves the slab systems; caches one LU factorization per distinct tau.
class CgpStepper {
 public:
  CgpStepper(const MolSystem& system, int k);

  const TimeCoupling& coupling() const { return coupling_; }

  /// loads holds b(t_{n,nu}) for nu = 0..k.
  SlabValues step(const TimePartition& partition, int n, const StatePair& prev,
                  std::span<const Vector> loads);
  SlabValues step(const TimePartition& partition, int n, const StatePair& prev);

 private:
  const LuFactorization& factorization(double tau);

  const MolSystem* system_;
  int k_;
  TimeCoupling coupling_;
  std::map<double, LuFactorization> factors_;
};

SlabValues cgp_step(const MolSystem& system, const TimePartition& partition,
                    int n, const StatePair& prev);

SlabTrajectory integrate(const MolSystem& system,
                         const TimePartition& partition);

/// Value on the slab containing t (see TimePartition::slab_of).
StatePair evaluate(const SlabTrajectory& traj, double t);
/// Polynomial of slab n evaluated at t (one-sided limits at the endpoints).
StatePair evaluate_on_slab(const SlabTrajectory& traj, int n, double t);
/// d/dt of the polynomial of slab n at t.
StatePair derivative_on_slab(const SlabTrajectory& traj, int n, double t);

/// Largest relative residual of the 2k slab equations of slab n, measured
/// against the magnitude of the individual terms.
double slab_residual(const MolSystem& system, const SlabTrajectory& traj,
                     int n);

}  // namespace stfem

#endif  // STFEM_CGP_HPP
