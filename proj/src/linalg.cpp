// SPDX-License-Identifier: Apache-2.0
#include "stfem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "stfem/error.hpp"

namespace stfem {

SparseMatrix SparseMatrix::from_triplets(std::int64_t rows, std::int64_t cols,
                                         std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw InvalidArgument("SparseMatrix: triplet (" + std::to_string(t.row) +
                            ", " + std::to_string(t.col) + ") out of bounds");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  for (std::size_t i = 0; i < triplets.size();) {
    const Triplet& first = triplets[i];
    double v = 0.0;
    std::size_t j = i;
    for (; j < triplets.size() && triplets[j].row == first.row &&
           triplets[j].col == first.col;
         ++j) {
      v += triplets[j].value;
    }
    m.col_idx_.push_back(first.col);
    m.values_.push_back(v);
    ++m.row_ptr_[first.row + 1];
    i = j;
  }
  for (std::int64_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

SparseMatrix SparseMatrix::identity(std::int64_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::int64_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense,
                                      double drop_tol) {
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      if (std::abs(dense(i, j)) > drop_tol) t.push_back({i, j, dense(i, j)});
    }
  }
  return from_triplets(dense.rows(), dense.cols(), std::move(t));
}

double SparseMatrix::coeff(std::int64_t i, std::int64_t j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[it - col_idx_.begin()];
}

void SparseMatrix::multiply(const Vector& x, Vector& y) const {
  if (x.size() != cols_) {
    throw InvalidArgument("SparseMatrix::multiply: size mismatch");
  }
  y.resize(rows_);
  for (std::int64_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::int64_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      s += values_[p] * x[col_idx_[p]];
    }
    y[i] = s;
  }
}

Vector SparseMatrix::multiply(const Vector& x) const {
  Vector y;
  multiply(x, y);
  return y;
}

Vector SparseMatrix::diagonal() const {
  Vector d = Vector::Zero(std::min(rows_, cols_));
  for (std::int64_t i = 0; i < d.size(); ++i) d[i] = coeff(i, i);
  return d;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (std::int64_t i = 0; i < rows_; ++i) {
    for (std::int64_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      d(i, col_idx_[p]) = values_[p];
    }
  }
  return d;
}

double SparseMatrix::max_asymmetry() const {
  if (rows_ != cols_) return INFINITY;
  double worst = 0.0;
  for (std::int64_t i = 0; i < rows_; ++i) {
    for (std::int64_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      worst = std::max(worst, std::abs(values_[p] - coeff(col_idx_[p], i)));
    }
  }
  return worst;
}

double SparseMatrix::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

CgResult cg_solve(const SparseMatrix& a, const Vector& b, double tol,
                  int max_iter) {
  const std::int64_t n = a.rows();
  if (a.cols() != n || b.size() != n) {
    throw InvalidArgument("cg_solve: dimension mismatch");
  }
  if (max_iter < 0) max_iter = static_cast<int>(10 * n + 10);

  CgResult result;
  result.x = Vector::Zero(n);
  const double b_norm = b.norm();
  if (b_norm == 0.0) return result;

  Vector inv_diag = a.diagonal();
  for (std::int64_t i = 0; i < n; ++i) {
    inv_diag[i] = inv_diag[i] != 0.0 ? 1.0 / inv_diag[i] : 1.0;
  }

  Vector r = b;
  Vector z = inv_diag.cwiseProduct(r);
  Vector p = z;
  Vector ap(n);
  double rz = r.dot(z);
  for (int it = 1; it <= max_iter; ++it) {
    a.multiply(p, ap);
    const double alpha = rz / p.dot(ap);
    result.x += alpha * p;
    r -= alpha * ap;
    result.iterations = it;
    result.relative_residual = r.norm() / b_norm;
    if (result.relative_residual <= tol) return result;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw LinearSolveError("cg_solve: no convergence after " +
                             std::to_string(max_iter) +
                             " iterations, relative residual " +
                             std::to_string(result.relative_residual),
                         result.relative_residual);
}

struct LuFactorization::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

LuFactorization::LuFactorization(const SparseMatrix& a)
    : impl_(std::make_unique<Impl>()), n_(a.rows()) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("lu_factor: matrix is not square");
  }
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nnz());
  const auto rp = a.row_offsets();
  const auto ci = a.column_indices();
  const auto v = a.values();
  for (std::int64_t i = 0; i < a.rows(); ++i) {
    for (std::int64_t p = rp[i]; p < rp[i + 1]; ++p) {
      t.emplace_back(static_cast<int>(i), static_cast<int>(ci[p]), v[p]);
    }
  }
  Eigen::SparseMatrix<double> m(a.rows(), a.cols());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  impl_->lu.analyzePattern(m);
  impl_->lu.factorize(m);
  if (impl_->lu.info() != Eigen::Success) {
    throw SingularMatrixError("lu_factor: " + impl_->lu.lastErrorMessage());
  }
}

LuFactorization::~LuFactorization() = default;
LuFactorization::LuFactorization(LuFactorization&&) noexcept = default;
LuFactorization& LuFactorization::operator=(LuFactorization&&) noexcept =
    default;

Vector LuFactorization::solve(const Vector& b) const {
  if (b.size() != n_) throw InvalidArgument("lu_solve: dimension mismatch");
  Vector x = impl_->lu.solve(b);
  return x;
}

LuFactorization lu_factor(const SparseMatrix& a) { return LuFactorization(a); }

Vector lu_solve(const LuFactorization& lu, const Vector& b) {
  return lu.solve(b);
}

BlockOperator::BlockOperator(const SparseMatrix& mass,
                             const SparseMatrix& stiffness,
                             Eigen::MatrixXd time_coupling,
                             Eigen::MatrixXd mass_coupling, double tau)
    : mass_(&mass),
      stiffness_(&stiffness),
      time_(std::move(time_coupling)),
      massc_(std::move(mass_coupling)),
      tau_(tau) {
  const auto k = time_.rows();
  if (k < 1 || time_.cols() != k + 1 || massc_.rows() != k ||
      massc_.cols() != k + 1) {
    throw InvalidArgument("BlockOperator: couplings must be k x (k+1)");
  }
  if (mass.rows() != stiffness.rows() || mass.rows() != mass.cols() ||
      stiffness.rows() != stiffness.cols()) {
    throw InvalidArgument("BlockOperator: mass/stiffness dimension mismatch");
  }
}

Vector BlockOperator::apply(const Vector& z) const {
  const int k = degree();
  const std::int64_t n = block_size();
  if (z.size() != size()) {
    throw InvalidArgument("BlockOperator::apply: size mismatch");
  }
  const double s = 0.5 * tau_;
  auto block = [&](const Vector& v, int comp, int mu) {
    return v.segment((comp * k + mu - 1) * n, n);
  };
  // Products M U0_mu, M U1_mu, A U0_mu for mu = 1..k.
  std::vector<Vector> mu0(k), mu1(k), au0(k);
  for (int mu = 1; mu <= k; ++mu) {
    mu0[mu - 1] = mass_->multiply(block(z, 0, mu));
    mu1[mu - 1] = mass_->multiply(block(z, 1, mu));
    au0[mu - 1] = stiffness_->multiply(block(z, 0, mu));
  }
  Vector out = Vector::Zero(size());
  for (int j = 0; j < k; ++j) {
    auto r0 = out.segment(j * n, n);
    auto r1 = out.segment((k + j) * n, n);
    for (int mu = 1; mu <= k; ++mu) {
      r0 += time_(j, mu) * mu0[mu - 1] - s * massc_(j, mu) * mu1[mu - 1];
      r1 += time_(j, mu) * mu1[mu - 1] + s * massc_(j, mu) * au0[mu - 1];
    }
  }
  return out;
}

SparseMatrix BlockOperator::assemble() const {
  const int k = degree();
  const std::int64_t n = block_size();
  const double s = 0.5 * tau_;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(4 * k * k) *
            static_cast<std::size_t>(mass_->nnz()));
  auto add = [&](const SparseMatrix& m, double factor, std::int64_t row0,
                 std::int64_t col0) {
    if (factor == 0.0) return;
    const auto rp = m.row_offsets();
    const auto ci = m.column_indices();
    const auto v = m.values();
    for (std::int64_t i = 0; i < m.rows(); ++i) {
      for (std::int64_t p = rp[i]; p < rp[i + 1]; ++p) {
        t.push_back({row0 + i, col0 + ci[p], factor * v[p]});
      }
    }
  };
  for (int j = 0; j < k; ++j) {
    for (int mu = 1; mu <= k; ++mu) {
      const std::int64_t c0 = (mu - 1) * n;
      const std::int64_t c1 = (k + mu - 1) * n;
      add(*mass_, time_(j, mu), j * n, c0);
      add(*mass_, -s * massc_(j, mu), j * n, c1);
      add(*mass_, time_(j, mu), (k + j) * n, c1);
      add(*stiffness_, s * massc_(j, mu), (k + j) * n, c0);
    }
  }
  return SparseMatrix::from_triplets(size(), size(), std::move(t));
}

}  // namespace stfem
