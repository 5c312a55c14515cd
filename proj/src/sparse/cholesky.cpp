#include "fgraph/sparse/cholesky.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fgraph/errors.hpp"
#include "fgraph/kernels/kernels.hpp"
#include "fgraph/sparse/ordering.hpp"

namespace fgraph::sparse {

SymbolicCholesky::SymbolicCholesky(const CscMatrix& h, std::vector<Index> perm)
    : n_(h.cols), perm_(std::move(perm)), h_col_ptr_(h.col_ptr), h_row_idx_(h.row_idx) {
  if (h.rows != h.cols) throw ContractViolation("Cholesky needs a square matrix");
  if (perm_.empty()) {
    perm_.resize(static_cast<std::size_t>(n_));
    std::iota(perm_.begin(), perm_.end(), Index{0});
  }
  checkPermutation(perm_, n_);
  const std::vector<Index> inv = inversePermutation(perm_);
  const auto n = static_cast<std::size_t>(n_);

  // Upper triangle of C = P H P^T.
  c_col_ptr_.assign(n + 1, 0);
  for (Index j = 0; j < n_; ++j) {
    for (Index p = h.col_ptr[j]; p < h.col_ptr[j + 1]; ++p) {
      const Index pi = inv[h.row_idx[p]], pj = inv[j];
      if (pi <= pj) ++c_col_ptr_[pj + 1];
    }
  }
  for (std::size_t k = 0; k < n; ++k) c_col_ptr_[k + 1] += c_col_ptr_[k];
  c_row_idx_.resize(static_cast<std::size_t>(c_col_ptr_[n]));
  c_src_.resize(c_row_idx_.size());
  {
    std::vector<Index> next(c_col_ptr_.begin(), c_col_ptr_.end() - 1);
    for (Index j = 0; j < n_; ++j) {
      for (Index p = h.col_ptr[j]; p < h.col_ptr[j + 1]; ++p) {
        const Index pi = inv[h.row_idx[p]], pj = inv[j];
        if (pi <= pj) {
          const Index q = next[pj]++;
          c_row_idx_[q] = pi;
          c_src_[q] = p;
        }
      }
    }
    std::vector<std::pair<Index, Index>> col;
    for (std::size_t k = 0; k < n; ++k) {
      col.clear();
      for (Index q = c_col_ptr_[k]; q < c_col_ptr_[k + 1]; ++q) col.emplace_back(c_row_idx_[q], c_src_[q]);
      std::sort(col.begin(), col.end());
      Index q = c_col_ptr_[k];
      for (const auto& [r, s] : col) {
        c_row_idx_[q] = r;
        c_src_[q++] = s;
      }
    }
  }

  // Elimination tree with path compression.
  parent_.assign(n, -1);
  {
    std::vector<Index> ancestor(n, -1);
    for (Index k = 0; k < n_; ++k) {
      for (Index q = c_col_ptr_[k]; q < c_col_ptr_[k + 1]; ++q) {
        Index i = c_row_idx_[q];
        while (i != -1 && i < k) {
          const Index next = ancestor[i];
          ancestor[i] = k;
          if (next == -1) {
            parent_[i] = k;
            break;
          }
          i = next;
        }
      }
    }
  }

  // Row k of L (= column k of R) is the etree reach of C(:, k).
  r_col_ptr_.assign(n + 1, 0);
  std::vector<Index> flag(n, -1);
  std::vector<Index> counts(n, 1);  // diagonal
  std::vector<Index> row;
  for (Index k = 0; k < n_; ++k) {
    row.clear();
    flag[k] = k;
    for (Index q = c_col_ptr_[k]; q < c_col_ptr_[k + 1]; ++q) {
      for (Index i = c_row_idx_[q]; i < k && flag[i] != k; i = parent_[i]) {
        row.push_back(i);
        flag[i] = k;
      }
    }
    std::sort(row.begin(), row.end());
    for (Index i : row) {
      r_row_idx_.push_back(i);
      ++counts[i];
    }
    r_col_ptr_[k + 1] = static_cast<Index>(r_row_idx_.size());
  }

  l_col_ptr_.assign(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) l_col_ptr_[j + 1] = l_col_ptr_[j] + counts[j];
  l_row_idx_.resize(static_cast<std::size_t>(l_col_ptr_[n]));
  r_lpos_.resize(r_row_idx_.size());
  std::vector<Index> next(l_col_ptr_.begin(), l_col_ptr_.end() - 1);
  for (Index k = 0; k < n_; ++k) {
    l_row_idx_[next[k]++] = k;  // columns are visited in k order, so the diagonal lands first
    for (Index q = r_col_ptr_[k]; q < r_col_ptr_[k + 1]; ++q) {
      const Index i = r_row_idx_[q];
      const Index pos = next[i]++;
      l_row_idx_[pos] = k;
      r_lpos_[q] = pos;
    }
  }
}

bool SymbolicCholesky::matches(const CscMatrix& h) const {
  return h.cols == n_ && h.rows == n_ && h.col_ptr == h_col_ptr_ && h.row_idx == h_row_idx_;
}

CholeskyFactor::CholeskyFactor(std::shared_ptr<const SymbolicCholesky> symbolic, const CscMatrix& h,
                               const CholeskyOptions& options)
    : symbolic_(std::move(symbolic)) {
  const SymbolicCholesky& s = *symbolic_;
  if (!s.matches(h)) throw ContractViolation("matrix pattern differs from the analyzed pattern");
  const Index n = s.n_;
  l_values_.assign(s.l_row_idx_.size(), 0.0);
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  double* lx = l_values_.data();
  const Index* li = s.l_row_idx_.data();

  for (Index k = 0; k < n; ++k) {
    for (Index q = s.c_col_ptr_[k]; q < s.c_col_ptr_[k + 1]; ++q) {
      x[s.c_row_idx_[q]] = h.values[s.c_src_[q]];
    }
    const double hkk = x[k];
    double d = hkk;
    x[k] = 0.0;
    for (Index q = s.r_col_ptr_[k]; q < s.r_col_ptr_[k + 1]; ++q) {
      const Index i = s.r_row_idx_[q];
      const Index pos = s.r_lpos_[q];
      const double lki = x[i] / lx[s.l_col_ptr_[i]];
      x[i] = 0.0;
      // Entries of column i above row k were filled by earlier rows.
      for (Index p = s.l_col_ptr_[i] + 1; p < pos; ++p) x[li[p]] -= lx[p] * lki;
      d -= lki * lki;
      lx[pos] = lki;
    }
    if (!(d > options.pivot_tolerance * hkk) || !(hkk > 0.0) || !std::isfinite(d)) {
      throw IndefiniteMatrixError(static_cast<std::size_t>(s.perm_[k]), d);
    }
    lx[s.l_col_ptr_[k]] = std::sqrt(d);
  }
}

CscMatrix CholeskyFactor::lower() const {
  const SymbolicCholesky& s = *symbolic_;
  CscMatrix l;
  l.rows = l.cols = s.n_;
  l.col_ptr = s.l_col_ptr_;
  l.row_idx = s.l_row_idx_;
  l.values = l_values_;
  return l;
}

CscMatrix CholeskyFactor::upper() const { return lower().transpose(); }

Eigen::VectorXd CholeskyFactor::solve(const Eigen::VectorXd& g) const {
  const SymbolicCholesky& s = *symbolic_;
  const Index n = s.n_;
  if (g.size() != n) throw ContractViolation("solve: right-hand side has wrong size");
  const double* lx = l_values_.data();
  const Index* li = s.l_row_idx_.data();
  const Index* lp = s.l_col_ptr_.data();

  Eigen::VectorXd y(n);
  for (Index k = 0; k < n; ++k) y[k] = g[s.perm_[k]];
  // R^T y = P g  (forward, L by columns)
  for (Index j = 0; j < n; ++j) {
    y[j] /= lx[lp[j]];
    const Index begin = lp[j] + 1;
    const double yj = y[j];
    for (Index p = begin; p < lp[j + 1]; ++p) y[li[p]] -= lx[p] * yj;
  }
  // R z = y  (backward, rows of R are columns of L)
  for (Index j = n - 1; j >= 0; --j) {
    const Index begin = lp[j] + 1;
    const double dot = kernels::gatherDot(lx + begin, li + begin, y.data(),
                                          static_cast<std::size_t>(lp[j + 1] - begin));
    y[j] = (y[j] - dot) / lx[lp[j]];
  }
  Eigen::VectorXd out(n);
  for (Index k = 0; k < n; ++k) out[s.perm_[k]] = y[k];
  return out;
}

CholeskyFactor sparseCholesky(const CscMatrix& h, std::vector<Index> perm,
                              const CholeskyOptions& options) {
  return CholeskyFactor(std::make_shared<const SymbolicCholesky>(h, std::move(perm)), h, options);
}

Eigen::VectorXd solveNormal(const CholeskyFactor& factor, const Eigen::VectorXd& g) {
  return factor.solve(g);
}

}  // namespace fgraph::sparse
