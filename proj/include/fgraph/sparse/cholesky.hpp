#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "fgraph/sparse/csc.hpp"

namespace fgraph::sparse {

struct CholeskyOptions {
  // A pivot d_k is rejected when d_k <= tolerance * H_kk.
  double pivot_tolerance = 1e-10;
};

// Symbolic analysis of P H P^T = R^T R for a fixed pattern of H and a fixed
// permutation. H must be stored with both triangles; only entries whose
// permuted row <= permuted column are read. Reusable across numeric
// factorizations of matrices with the same pattern.
class SymbolicCholesky {
 public:
  // perm[new] = old; empty means identity.
  SymbolicCholesky(const CscMatrix& h, std::vector<Index> perm);

  Index size() const { return n_; }
  const std::vector<Index>& permutation() const { return perm_; }
  const std::vector<Index>& eliminationTree() const { return parent_; }
  // Nonzeros of R including the diagonal.
  Index factorNonzeros() const { return static_cast<Index>(l_row_idx_.size()); }
  bool matches(const CscMatrix& h) const;

 private:
  friend class CholeskyFactor;

  Index n_ = 0;
  std::vector<Index> perm_;
  std::vector<Index> parent_;

  // Pattern of the analyzed H.
  std::vector<Index> h_col_ptr_, h_row_idx_;

  // Upper triangle of P H P^T, column by column; c_src_ points into H values.
  std::vector<Index> c_col_ptr_, c_row_idx_, c_src_;

  // L = R^T, compressed by column, diagonal first.
  std::vector<Index> l_col_ptr_, l_row_idx_;

  // R by column (rows < k, ascending) and the L position of each entry.
  std::vector<Index> r_col_ptr_, r_row_idx_, r_lpos_;
};

// Numeric factor R^T R = P H P^T.
class CholeskyFactor {
 public:
  // Throws IndefiniteMatrixError naming the failing column of H, or
  // ContractViolation if h does not have the analyzed pattern.
  CholeskyFactor(std::shared_ptr<const SymbolicCholesky> symbolic, const CscMatrix& h,
                 const CholeskyOptions& options = {});

  const SymbolicCholesky& symbolic() const { return *symbolic_; }
  const std::shared_ptr<const SymbolicCholesky>& symbolicPtr() const { return symbolic_; }
  const std::vector<Index>& permutation() const { return symbolic_->permutation(); }

  // Upper-triangular factor R in CSC form.
  CscMatrix upper() const;
  // L = R^T in CSC form.
  CscMatrix lower() const;

  // Solves H x = g: R^T y = P g, R z = y, x = P^T z.
  Eigen::VectorXd solve(const Eigen::VectorXd& g) const;

 private:
  std::shared_ptr<const SymbolicCholesky> symbolic_;
  std::vector<double> l_values_;
};

CholeskyFactor sparseCholesky(const CscMatrix& h, std::vector<Index> perm,
                              const CholeskyOptions& options = {});

Eigen::VectorXd solveNormal(const CholeskyFactor& factor, const Eigen::VectorXd& g);

}  // namespace fgraph::sparse
