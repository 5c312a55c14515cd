#include "fgraph/sparse/csc.hpp"

#include <algorithm>
#include <iomanip>
#include <string>

#include "fgraph/errors.hpp"
#include "fgraph/kernels/kernels.hpp"

namespace fgraph::sparse {

CscMatrix CscMatrix::fromTriplets(Index rows, Index cols, const std::vector<Triplet>& triplets) {
  CscMatrix m;
  m.rows = rows;
  m.cols = cols;
  std::vector<Index> counts(static_cast<std::size_t>(cols) + 1, 0);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw ContractViolation("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                              ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    ++counts[static_cast<std::size_t>(t.col) + 1];
  }
  for (Index c = 0; c < cols; ++c) counts[c + 1] += counts[c];

  // Bucket by column, then sort each column by row and merge duplicates.
  std::vector<Index> rows_tmp(triplets.size());
  std::vector<double> vals_tmp(triplets.size());
  std::vector<Index> next(counts.begin(), counts.end() - 1);
  for (const auto& t : triplets) {
    const Index p = next[t.col]++;
    rows_tmp[p] = t.row;
    vals_tmp[p] = t.value;
  }

  m.col_ptr.assign(static_cast<std::size_t>(cols) + 1, 0);
  m.row_idx.reserve(triplets.size());
  m.values.reserve(triplets.size());
  std::vector<std::pair<Index, double>> column;
  for (Index c = 0; c < cols; ++c) {
    column.clear();
    for (Index p = counts[c]; p < counts[c + 1]; ++p) column.emplace_back(rows_tmp[p], vals_tmp[p]);
    std::stable_sort(column.begin(), column.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < column.size(); ++i) {
      if (i > 0 && column[i].first == column[i - 1].first) {
        m.values.back() += column[i].second;
      } else {
        m.row_idx.push_back(column[i].first);
        m.values.push_back(column[i].second);
      }
    }
    m.col_ptr[c + 1] = static_cast<Index>(m.row_idx.size());
  }
  return m;
}

CscMatrix CscMatrix::fromDense(const Eigen::MatrixXd& dense, double drop_tolerance) {
  std::vector<Triplet> t;
  for (Index c = 0; c < dense.cols(); ++c) {
    for (Index r = 0; r < dense.rows(); ++r) {
      if (std::abs(dense(r, c)) > drop_tolerance) t.push_back({r, c, dense(r, c)});
    }
  }
  return fromTriplets(dense.rows(), dense.cols(), t);
}

CscMatrix CscMatrix::identity(Index n) {
  CscMatrix m;
  m.rows = m.cols = n;
  m.col_ptr.resize(static_cast<std::size_t>(n) + 1);
  m.row_idx.resize(static_cast<std::size_t>(n));
  m.values.assign(static_cast<std::size_t>(n), 1.0);
  for (Index i = 0; i <= n; ++i) m.col_ptr[i] = i;
  for (Index i = 0; i < n; ++i) m.row_idx[i] = i;
  return m;
}

bool CscMatrix::samePattern(const CscMatrix& other) const {
  return rows == other.rows && cols == other.cols && col_ptr == other.col_ptr &&
         row_idx == other.row_idx;
}

Index CscMatrix::find(Index r, Index c) const {
  const auto first = row_idx.begin() + col_ptr[c];
  const auto last = row_idx.begin() + col_ptr[c + 1];
  auto it = std::lower_bound(first, last, r);
  if (it == last || *it != r) return -1;
  return static_cast<Index>(it - row_idx.begin());
}

double CscMatrix::coeff(Index r, Index c) const {
  const Index p = find(r, c);
  return p < 0 ? 0.0 : values[p];
}

CscMatrix CscMatrix::transpose() const {
  CscMatrix t;
  t.rows = cols;
  t.cols = rows;
  t.col_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (Index r : row_idx) ++t.col_ptr[r + 1];
  for (Index r = 0; r < rows; ++r) t.col_ptr[r + 1] += t.col_ptr[r];
  t.row_idx.resize(row_idx.size());
  t.values.resize(values.size());
  std::vector<Index> next(t.col_ptr.begin(), t.col_ptr.end() - 1);
  for (Index c = 0; c < cols; ++c) {
    for (Index p = col_ptr[c]; p < col_ptr[c + 1]; ++p) {
      const Index q = next[row_idx[p]]++;
      t.row_idx[q] = c;
      t.values[q] = values[p];
    }
  }
  return t;
}

Eigen::MatrixXd CscMatrix::toDense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index p = col_ptr[c]; p < col_ptr[c + 1]; ++p) d(row_idx[p], c) += values[p];
  }
  return d;
}

Eigen::VectorXd CscMatrix::multiply(const Eigen::VectorXd& x) const {
  if (x.size() != cols) throw ContractViolation("multiply: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);
  for (Index c = 0; c < cols; ++c) {
    const double xc = x[c];
    if (xc == 0.0) continue;
    for (Index p = col_ptr[c]; p < col_ptr[c + 1]; ++p) y[row_idx[p]] += values[p] * xc;
  }
  return y;
}

Eigen::VectorXd CscMatrix::multiplyTranspose(const Eigen::VectorXd& x) const {
  if (x.size() != rows) throw ContractViolation("multiplyTranspose: size mismatch");
  Eigen::VectorXd y(cols);
  for (Index c = 0; c < cols; ++c) {
    const Index begin = col_ptr[c];
    y[c] = kernels::gatherDot(values.data() + begin, row_idx.data() + begin, x.data(),
                              static_cast<std::size_t>(col_ptr[c + 1] - begin));
  }
  return y;
}

void CscMatrix::validate() const {
  if (rows < 0 || cols < 0) throw ContractViolation("negative matrix dimension");
  if (col_ptr.size() != static_cast<std::size_t>(cols) + 1 || col_ptr.front() != 0) {
    throw ContractViolation("column offsets malformed");
  }
  if (static_cast<std::size_t>(col_ptr.back()) != row_idx.size() ||
      row_idx.size() != values.size()) {
    throw ContractViolation("nonzero count mismatch");
  }
  for (Index c = 0; c < cols; ++c) {
    if (col_ptr[c + 1] < col_ptr[c]) throw ContractViolation("column offsets decrease");
    for (Index p = col_ptr[c]; p < col_ptr[c + 1]; ++p) {
      if (row_idx[p] < 0 || row_idx[p] >= rows) throw ContractViolation("row index out of range");
      if (p > col_ptr[c] && row_idx[p] <= row_idx[p - 1]) {
        throw ContractViolation("row indices not strictly increasing in column " +
                                std::to_string(c));
      }
    }
  }
}

CscMatrix gramian(const CscMatrix& a) {
  // Column j of A^T A = sum_{k in col j of A} a_kj * (row k of A)^T.
  const CscMatrix at = a.transpose();  // column k of at == row k of a
  CscMatrix h;
  h.rows = h.cols = a.cols;
  h.col_ptr.assign(static_cast<std::size_t>(a.cols) + 1, 0);
  std::vector<Index> mark(static_cast<std::size_t>(a.cols), -1);
  std::vector<double> acc(static_cast<std::size_t>(a.cols), 0.0);
  std::vector<Index> pattern;
  for (Index j = 0; j < a.cols; ++j) {
    pattern.clear();
    for (Index p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) {
      const Index k = a.row_idx[p];
      const double akj = a.values[p];
      for (Index q = at.col_ptr[k]; q < at.col_ptr[k + 1]; ++q) {
        const Index i = at.row_idx[q];
        if (mark[i] != j) {
          mark[i] = j;
          acc[i] = 0.0;
          pattern.push_back(i);
        }
        acc[i] += at.values[q] * akj;
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (Index i : pattern) {
      h.row_idx.push_back(i);
      h.values.push_back(acc[i]);
    }
    h.col_ptr[j + 1] = static_cast<Index>(h.row_idx.size());
  }
  return h;
}

Eigen::VectorXd symmetricMultiply(const CscMatrix& s, const Eigen::VectorXd& x) {
  return s.multiplyTranspose(x);
}

void writeMatrixMarket(std::ostream& os, const CscMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows << ' ' << a.cols << ' ' << a.nnz() << '\n';
  os << std::setprecision(17);
  for (Index c = 0; c < a.cols; ++c) {
    for (Index p = a.col_ptr[c]; p < a.col_ptr[c + 1]; ++p) {
      os << a.row_idx[p] + 1 << ' ' << c + 1 << ' ' << a.values[p] << '\n';
    }
  }
}

}  // namespace fgraph::sparse
