#include "fgraph/sparse/linear_system.hpp"

#include <algorithm>
#include <string>

#include "fgraph/errors.hpp"

namespace fgraph::sparse {

bool BlockSparsityPattern::hasBlock(std::size_t factor, std::size_t key) const {
  return std::find(blocks.begin(), blocks.end(), std::make_pair(factor, key)) != blocks.end();
}

LinearSystem linearize(const FactorGraph& graph, const Variables& values,
                       const VariableLayout& layout) {
  LinearSystem sys;
  auto& pattern = sys.pattern;
  pattern.col_offsets.assign(layout.offsets().begin(), layout.offsets().end());
  pattern.row_offsets.reserve(graph.size() + 1);
  pattern.row_offsets.push_back(0);
  for (const auto& f : graph) pattern.row_offsets.push_back(pattern.row_offsets.back() + f->dim());
  const Index rows = pattern.row_offsets.back();

  sys.rhs.resize(rows);
  std::vector<Triplet> triplets;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const Factor& f = *graph[i];
    Eigen::VectorXd e = checkedError(graph, i, values);
    std::vector<Eigen::MatrixXd> blocks;
    try {
      blocks = f.jacobians(values);
    } catch (const MissingKeyError&) {
      throw;
    } catch (const ContractViolation& ex) {
      throw DimensionMismatch(i, ex.what());
    }
    if (blocks.size() != f.keys().size()) {
      throw DimensionMismatch(i, "returned " + std::to_string(blocks.size()) +
                                     " Jacobian blocks for " + std::to_string(f.keys().size()) +
                                     " keys");
    }
    std::vector<std::size_t> key_index(f.keys().size());
    for (std::size_t j = 0; j < f.keys().size(); ++j) {
      key_index[j] = layout.indexOf(f.keys()[j]);
      const auto& b = blocks[j];
      if (b.rows() != f.dim() || b.cols() != layout.dim(key_index[j])) {
        throw DimensionMismatch(i, "Jacobian block for " + f.keys()[j].str() + " is " +
                                       std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                                       ", expected " + std::to_string(f.dim()) + "x" +
                                       std::to_string(layout.dim(key_index[j])));
      }
    }
    if (f.loss()) f.loss()->whitenSystem(blocks, e);

    const Index r0 = pattern.row_offsets[i];
    sys.rhs.segment(r0, f.dim()) = e;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      const Index c0 = layout.offset(key_index[j]);
      const auto& b = blocks[j];
      for (Index c = 0; c < b.cols(); ++c) {
        for (Index r = 0; r < b.rows(); ++r) triplets.push_back({r0 + r, c0 + c, b(r, c)});
      }
      pattern.blocks.emplace_back(i, key_index[j]);
    }
  }
  sys.jacobian = CscMatrix::fromTriplets(rows, layout.totalDim(), triplets);
  return sys;
}

NormalSystem assembleNormal(const CscMatrix& jacobian, const Eigen::VectorXd& rhs) {
  if (rhs.size() != jacobian.rows) throw ContractViolation("assembleNormal: rhs size mismatch");
  return {gramian(jacobian), jacobian.multiplyTranspose(rhs)};
}

std::set<std::pair<std::size_t, std::size_t>> blockStructure(const CscMatrix& m,
                                                             const std::vector<Index>& offsets) {
  auto blockOf = [&](Index idx) {
    auto it = std::upper_bound(offsets.begin(), offsets.end(), idx);
    return static_cast<std::size_t>(it - offsets.begin()) - 1;
  };
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (Index c = 0; c < m.cols; ++c) {
    const std::size_t bc = blockOf(c);
    for (Index p = m.col_ptr[c]; p < m.col_ptr[c + 1]; ++p) out.emplace(blockOf(m.row_idx[p]), bc);
  }
  return out;
}

}  // namespace fgraph::sparse
