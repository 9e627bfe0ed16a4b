// SPDX-License-Identifier: Apache-2.0
#ifndef STFEM_LINALG_HPP
#define STFEM_LINALG_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace stfem {

using Vector = Eigen::VectorXd;

struct Triplet {
  std::int64_t row;
  std::int64_t col;
  double value;
};

/// Compressed-row sparse matrix. Column indices are strictly increasing
/// within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Duplicate (row, col) entries are summed in input order, so the result
  /// is bitwise reproducible for a fixed triplet sequence.
  static SparseMatrix from_triplets(std::int64_t rows, std::int64_t cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix identity(std::int64_t n);
  static SparseMatrix from_dense(const Eigen::MatrixXd& dense,
                                 double drop_tol = 0.0);

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

  std::span<const std::int64_t> row_offsets() const { return row_ptr_; }
  std::span<const std::int64_t> column_indices() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  /// Entry (i, j), zero when not stored.
  double coeff(std::int64_t i, std::int64_t j) const;

  Vector multiply(const Vector& x) const;
  /// y = A x without allocating.
  void multiply(const Vector& x, Vector& y) const;

  Vector diagonal() const;
  Eigen::MatrixXd to_dense() const;

  /// max_ij |A_ij - A_ji|.
  double max_asymmetry() const;

  /// Sum of all stored entries.
  double sum() const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::int64_t rows_ = 0;
  std::int64_t cols_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<std::int64_t> col_idx_;
  std::vector<double> values_;
};

struct CgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for SPD systems. Stops once
/// ||A x - b|| <= tol ||b||; throws LinearSolveError at the iteration cap.
CgResult cg_solve(const SparseMatrix& a, const Vector& b, double tol = 1e-12,
                  int max_iter = -1);

/// Sparse LU factorization with partial pivoting. Immutable once built;
/// concurrent solve() calls are safe.
class LuFactorization {
 public:
  explicit LuFactorization(const SparseMatrix& a);
  ~LuFactorization();
  LuFactorization(LuFactorization&&) noexcept;
  LuFactorization& operator=(LuFactorization&&) noexcept;

  std::int64_t size() const { return n_; }
  Vector solve(const Vector& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::int64_t n_ = 0;
};

LuFactorization lu_factor(const SparseMatrix& a);
Vector lu_solve(const LuFactorization& lu, const Vector& b);

/// Space-time block operator of one cGP(k) slab.
///
/// Unknowns are ordered [U0_1 .. U0_k, U1_1 .. U1_k], each block of size
/// N = M.rows(). With the k x (k+1) couplings
///   time(j, mu) = sum_nu alpha(j, nu) D(nu, mu),   mass(j, nu) = alpha(j, nu)
/// and s = tau / 2, block row j of the two equations reads
///   sum_mu time(j,mu) M U0_mu - s sum_nu mass(j,nu) M U1_nu
///   sum_mu time(j,mu) M U1_mu + s sum_nu mass(j,nu) A U0_nu
/// restricted to columns mu, nu = 1..k (column 0 is the known left value).
class BlockOperator {
 public:
  BlockOperator(const SparseMatrix& mass, const SparseMatrix& stiffness,
                Eigen::MatrixXd time_coupling, Eigen::MatrixXd mass_coupling,
                double tau);

  int degree() const { return static_cast<int>(time_.rows()); }
  std::int64_t block_size() const { return mass_->rows(); }
  std::int64_t size() const { return 2 * degree() * block_size(); }
  double tau() const { return tau_; }

  const Eigen::MatrixXd& time_coupling() const { return time_; }
  const Eigen::MatrixXd& mass_coupling() const { return massc_; }

  Vector apply(const Vector& z) const;
  SparseMatrix assemble() const;

 private:
  const SparseMatrix* mass_;
  const SparseMatrix* stiffness_;
  Eigen::MatrixXd time_;
  Eigen::MatrixXd massc_;
  double tau_;
};

}  // namespace stfem

#endif  // STFEM_LINALG_HPP
