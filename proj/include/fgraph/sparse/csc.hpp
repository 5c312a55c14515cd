#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include <Eigen/Core>

namespace fgraph::sparse {

using Index = std::ptrdiff_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Compressed sparse column storage. Row indices are strictly increasing
// within each column. Explicit zeros are kept: the structure, not the values,
// defines the pattern.
struct CscMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<Index> col_ptr{0};
  std::vector<Index> row_idx;
  std::vector<double> values;

  // Duplicate coordinates are summed.
  static CscMatrix fromTriplets(Index rows, Index cols, const std::vector<Triplet>& triplets);
  static CscMatrix fromDense(const Eigen::MatrixXd& dense, double drop_tolerance = 0.0);
  static CscMatrix identity(Index n);

  Index nnz() const { return col_ptr.empty() ? 0 : col_ptr.back(); }
  bool samePattern(const CscMatrix& other) const;

  // Structural position of (r, c) in values, or -1.
  Index find(Index r, Index c) const;
  double coeff(Index r, Index c) const;

  CscMatrix transpose() const;
  Eigen::MatrixXd toDense() const;

  // y = A x
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  // y = A^T x
  Eigen::VectorXd multiplyTranspose(const Eigen::VectorXd& x) const;

  // Throws ContractViolation if offsets or row indices are malformed.
  void validate() const;
};

// Symmetric product A^T A, stored with both triangles.
CscMatrix gramian(const CscMatrix& a);

// y = S x for symmetric S stored with both triangles (column i == row i).
Eigen::VectorXd symmetricMultiply(const CscMatrix& s, const Eigen::VectorXd& x);

// MatrixMarket coordinate (real general) text dump.
void writeMatrixMarket(std::ostream& os, const CscMatrix& a);

}  // namespace fgraph::sparse
