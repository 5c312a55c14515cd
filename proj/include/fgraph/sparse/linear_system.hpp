#pragma once

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fgraph/factor_graph.hpp"
#include "fgraph/sparse/csc.hpp"
#include "fgraph/variables.hpp"

namespace fgraph::sparse {

// Row bands (one per factor, insertion order), column bands (one per key,
// layout order) and the (factor, key) blocks present in the Jacobian.
struct BlockSparsityPattern {
  std::vector<Index> row_offsets;  // factors + 1 entries
  std::vector<Index> col_offsets;  // keys + 1 entries
  std::vector<std::pair<std::size_t, std::size_t>> blocks;

  std::size_t factorCount() const { return row_offsets.empty() ? 0 : row_offsets.size() - 1; }
  std::size_t keyCount() const { return col_offsets.empty() ? 0 : col_offsets.size() - 1; }
  bool hasBlock(std::size_t factor, std::size_t key) const;
};

// Whitened linearization: min ||J dx + b||^2 with b = stacked R_i f_i(x0).
struct LinearSystem {
  CscMatrix jacobian;
  Eigen::VectorXd rhs;
  BlockSparsityPattern pattern;
};

// Throws MissingKeyError (key absent from values or layout) or
// DimensionMismatch (factor returned the wrong shape).
LinearSystem linearize(const FactorGraph& graph, const Variables& values,
                       const VariableLayout& layout);

// H = J^T J (both triangles stored), g = J^T b.
struct NormalSystem {
  CscMatrix hessian;
  Eigen::VectorXd gradient;
};

NormalSystem assembleNormal(const CscMatrix& jacobian, const Eigen::VectorXd& rhs);

// Structurally nonzero (row block, column block) pairs of a matrix whose rows
// and columns are both partitioned by `offsets`.
std::set<std::pair<std::size_t, std::size_t>> blockStructure(const CscMatrix& m,
                                                             const std::vector<Index>& offsets);

}  // namespace fgraph::sparse
