// SPDX-License-Identifier: Apache-2.0
#include "stfem/cgp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stfem/error.hpp"

namespace stfem {

TimePartition::TimePartition(std::vector<double> grid, int k)
    : grid_(std::move(grid)),
      k_(k),
      lobatto_(gauss_lobatto_rule(k >= 1 ? k + 1 : 2)),
      basis_(lobatto_.nodes) {
  if (k < 1) {
    throw InvalidArgument("TimePartition: degree k must be >= 1, got " +
                          std::to_string(k));
  }
  if (grid_.size() < 2) {
    throw InvalidArgument("TimePartition: need at least one slab");
  }
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) {
      throw InvalidArgument("TimePartition: grid must be strictly increasing");
    }
  }
}

TimePartition TimePartition::uniform(double final_time, int steps, int k) {
  if (steps < 1 || !(final_time > 0.0)) {
    throw InvalidArgument("TimePartition::uniform: need T > 0 and N >= 1");
  }
  std::vector<double> grid(steps + 1);
  for (int n = 0; n <= steps; ++n) grid[n] = final_time * n / steps;
  TimePartition p(std::move(grid), k);
  p.uniform_ = true;
  p.uniform_tau_ = final_time / steps;
  return p;
}

double TimePartition::tau(int n) const {
  return uniform_ ? uniform_tau_ : grid_[n] - grid_[n - 1];
}

double TimePartition::node(int n, int mu) const {
  if (mu == 0) return grid_[n - 1];
  if (mu == k_) return grid_[n];
  return 0.5 * (grid_[n - 1] + grid_[n]) + 0.5 * tau(n) * lobatto_.nodes[mu];
}

double TimePartition::to_reference(int n, double t) const {
  if (t == grid_[n - 1]) return -1.0;
  if (t == grid_[n]) return 1.0;
  return (2.0 * t - grid_[n - 1] - grid_[n]) / (grid_[n] - grid_[n - 1]);
}

int TimePartition::slab_of(double t) const {
  if (!(t >= grid_.front() && t <= grid_.back())) {
    throw RangeError("time " + std::to_string(t) + " outside [" +
                     std::to_string(grid_.front()) + ", " +
                     std::to_string(grid_.back()) + "]");
  }
  if (t == grid_.front()) return 1;
  const auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
  return static_cast<int>(it - grid_.begin());
}

MolSystem make_system(std::shared_ptr<const FeSpace> space,
                      const WaveProblem& problem, InitialMode mode,
                      double cg_tol, int cg_max_iter) {
  if (!space) throw InvalidArgument("make_system: null space");
  MolSystem sys;
  sys.space = space;
  sys.mass = space->mass();
  sys.stiffness = space->stiffness();
  sys.cg_tol = cg_tol;
  sys.cg_max_iter = cg_max_iter;
  sys.load = [space, f = problem.rhs_f](double t) {
    return assemble_load(
        *space, {[&f, t](double x1, double x2) { return f(x1, x2, t); }, {}});
  };
  if (mode == InitialMode::ritz) {
    if (!problem.u0.gradient || !problem.u1.gradient) {
      throw InvalidArgument(
          "make_system: ritz initial mode needs gradients of u0 and u1");
    }
    sys.initial = {ritz_project(*space, problem.u0, cg_tol, cg_max_iter),
                   ritz_project(*space, problem.u1, cg_tol, cg_max_iter)};
  } else {
    sys.initial = {space->interpolate(problem.u0),
                   space->interpolate(problem.u1)};
  }
  return sys;
}

TimeCoupling time_coupling(int k) {
  if (k < 1) throw InvalidArgument("time_coupling: k must be >= 1");
  TimeCoupling c;
  c.lobatto = gauss_lobatto_rule(k + 1);
  c.gauss = gauss_rule(k);
  c.diff = NodalBasis(c.lobatto.nodes).diff_matrix();
  const NodalBasis test(c.gauss.nodes);
  c.alpha.resize(k, k + 1);
  for (int j = 0; j < k; ++j) {
    for (int nu = 0; nu <= k; ++nu) {
      c.alpha(j, nu) = c.lobatto.weights[nu] * test.value(j, c.lobatto.nodes[nu]);
    }
  }
  c.time = c.alpha * c.diff;
  return c;
}

SlabTrajectory::SlabTrajectory(TimePartition partition, StatePair initial)
    : partition_(std::move(partition)) {
  if (initial[0].size() != initial[1].size()) {
    throw InvalidArgument("SlabTrajectory: initial components differ in size");
  }
  const std::size_t total =
      static_cast<std::size_t>(partition_.slab_count()) * partition_.degree() + 1;
  for (int c = 0; c < 2; ++c) {
    nodes_[c].reserve(total);
    nodes_[c].push_back(std::move(initial[c]));
  }
}

int SlabTrajectory::completed_slabs() const {
  return static_cast<int>((nodes_[0].size() - 1) / degree());
}

std::span<const Vector> SlabTrajectory::slab(int component, int n) const {
  if (n < 1 || n > completed_slabs()) {
    throw RangeError("slab index " + std::to_string(n) + " not available");
  }
  const std::size_t k = degree();
  return std::span<const Vector>(nodes_[component]).subspan((n - 1) * k, k + 1);
}

StatePair SlabTrajectory::at_grid(int n) const {
  if (n < 0 || n > completed_slabs()) {
    throw RangeError("grid index " + std::to_string(n) + " not available");
  }
  const std::size_t i = static_cast<std::size_t>(n) * degree();
  return {nodes_[0][i], nodes_[1][i]};
}

void SlabTrajectory::append(std::vector<Vector> u0, std::vector<Vector> u1) {
  const std::size_t k = degree();
  if (u0.size() != k || u1.size() != k) {
    throw InvalidArgument("SlabTrajectory::append: expected k vectors");
  }
  if (complete()) throw RangeError("SlabTrajectory::append: already complete");
  for (std::size_t mu = 0; mu < k; ++mu) {
    nodes_[0].push_back(std::move(u0[mu]));
    nodes_[1].push_back(std::move(u1[mu]));
  }
}

CgpStepper::CgpStepper(const MolSystem& system, int k)
    : system_(&system), k_(k), coupling_(time_coupling(k)) {
  if (system.mass.rows() != system.stiffness.rows()) {
    throw InvalidArgument("CgpStepper: mass and stiffness sizes differ");
  }
}

const LuFactorization& CgpStepper::factorization(double tau) {
  auto it = factors_.find(tau);
  if (it == factors_.end()) {
    const BlockOperator op(system_->mass, system_->stiffness, coupling_.time,
                           coupling_.alpha, tau);
    it = factors_.emplace(tau, LuFactorization(op.assemble())).first;
  }
  return it->second;
}

SlabValues CgpStepper::step(const TimePartition& partition, int n,
                            const StatePair& prev,
                            std::span<const Vector> loads) {
  if (partition.degree() != k_) {
    throw InvalidArgument("CgpStepper: partition degree differs from stepper");
  }
  if (n < 1 || n > partition.slab_count()) {
    throw RangeError("CgpStepper: slab " + std::to_string(n) + " out of range");
  }
  const std::int64_t size = system_->size();
  if (loads.size() != static_cast<std::size_t>(k_ + 1)) {
    throw InvalidArgument("CgpStepper: expected k+1 load vectors");
  }
  for (const Vector& b : loads) {
    if (b.size() != size) {
      throw InvalidArgument("CgpStepper: load vector has wrong dimension");
    }
  }
  if (prev[0].size() != size || prev[1].size() != size) {
    throw InvalidArgument("CgpStepper: previous state has wrong dimension");
  }

  const double tau = partition.tau(n);
  const double s = 0.5 * tau;
  const Eigen::MatrixXd& time = coupling_.time;
  const Eigen::MatrixXd& alpha = coupling_.alpha;
  const Vector m_u0 = system_->mass.multiply(prev[0]);
  const Vector m_u1 = system_->mass.multiply(prev[1]);
  const Vector a_u0 = system_->stiffness.multiply(prev[0]);

  Vector rhs(2 * k_ * size);
  for (int j = 0; j < k_; ++j) {
    auto r0 = rhs.segment(j * size, size);
    auto r1 = rhs.segment((k_ + j) * size, size);
    r0 = -time(j, 0) * m_u0 + s * alpha(j, 0) * m_u1;
    r1 = -time(j, 0) * m_u1 - s * alpha(j, 0) * a_u0;
    for (int nu = 0; nu <= k_; ++nu) r1 += s * alpha(j, nu) * loads[nu];
  }

  const Vector z = factorization(tau).solve(rhs);
  SlabValues out;
  for (int mu = 0; mu < k_; ++mu) {
    out.u0.push_back(z.segment(mu * size, size));
    out.u1.push_back(z.segment((k_ + mu) * size, size));
  }
  return out;
}

SlabValues CgpStepper::step(const TimePartition& partition, int n,
                            const StatePair& prev) {
  std::vector<Vector> loads;
  for (int nu = 0; nu <= k_; ++nu) {
    loads.push_back(system_->load(partition.node(n, nu)));
  }
  return step(partition, n, prev, loads);
}

SlabValues cgp_step(const MolSystem& system, const TimePartition& partition,
                    int n, const StatePair& prev) {
  CgpStepper stepper(system, partition.degree());
  return stepper.step(partition, n, prev);
}

SlabTrajectory integrate(const MolSystem& system,
                         const TimePartition& partition) {
  const int k = partition.degree();
  SlabTrajectory traj(partition, system.initial);
  CgpStepper stepper(system, k);
  std::vector<Vector> loads(k + 1);
  loads[k] = system.load(partition.node(1, 0));
  for (int n = 1; n <= partition.slab_count(); ++n) {
    loads[0] = std::move(loads[k]);
    for (int nu = 1; nu <= k; ++nu) loads[nu] = system.load(partition.node(n, nu));
    SlabValues v = stepper.step(partition, n, traj.at_grid(n - 1), loads);
    traj.append(std::move(v.u0), std::move(v.u1));
  }
  return traj;
}

StatePair evaluate_on_slab(const SlabTrajectory& traj, int n, double t) {
  const TimePartition& p = traj.partition();
  const double x = p.to_reference(n, t);
  return {eval_lagrange(p.basis(), traj.slab(0, n), x),
          eval_lagrange(p.basis(), traj.slab(1, n), x)};
}

StatePair evaluate(const SlabTrajectory& traj, double t) {
  return evaluate_on_slab(traj, traj.partition().slab_of(t), t);
}

StatePair derivative_on_slab(const SlabTrajectory& traj, int n, double t) {
  const TimePartition& p = traj.partition();
  const double x = p.to_reference(n, t);
  const double scale = 2.0 / p.tau(n);
  StatePair out;
  for (int c = 0; c < 2; ++c) {
    const auto nodes = traj.slab(c, n);
    out[c] = Vector::Zero(nodes.front().size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      out[c] += scale * p.basis().derivative(j, x) * nodes[j];
    }
  }
  return out;
}

double slab_residual(const MolSystem& system, const SlabTrajectory& traj,
                     int n) {
  const TimePartition& p = traj.partition();
  const int k = p.degree();
  const TimeCoupling c = time_coupling(k);
  const double s = 0.5 * p.tau(n);
  const auto u0 = traj.slab(0, n);
  const auto u1 = traj.slab(1, n);
  std::vector<Vector> mu0, mu1, au0, b;
  for (int mu = 0; mu <= k; ++mu) {
    mu0.push_back(system.mass.multiply(u0[mu]));
    mu1.push_back(system.mass.multiply(u1[mu]));
    au0.push_back(system.stiffness.multiply(u0[mu]));
    b.push_back(system.load(p.node(n, mu)));
  }
  double worst = 0.0;
  auto relative = [](const Vector& r, double scale) {
    return scale > 0.0 ? r.norm() / scale : r.norm();
  };
  for (int j = 0; j < k; ++j) {
    Vector r0 = Vector::Zero(system.size());
    Vector r1 = Vector::Zero(system.size());
    double s0 = 0.0, s1 = 0.0;
    for (int mu = 0; mu <= k; ++mu) {
      r0 += c.time(j, mu) * mu0[mu] - s * c.alpha(j, mu) * mu1[mu];
      r1 += c.time(j, mu) * mu1[mu] + s * c.alpha(j, mu) * (au0[mu] - b[mu]);
      s0 += std::abs(c.time(j, mu)) * mu0[mu].norm() +
            s * std::abs(c.alpha(j, mu)) * mu1[mu].norm();
      s1 += std::abs(c.time(j, mu)) * mu1[mu].norm() +
            s * std::abs(c.alpha(j, mu)) * (au0[mu].norm() + b[mu].norm());
    }
    worst = std::max({worst, relative(r0, s0), relative(r1, s1)});
  }
  return worst;
}

}  // namespace stfem
