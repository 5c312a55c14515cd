#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <ostream>
#include <utility>
#include <vector>

#include "fgraph/factor.hpp"
#include "fgraph/key.hpp"
#include "fgraph/variables.hpp"

namespace fgraph {

// Sequence of factors; insertion order defines residual row order.
class FactorGraph {
 public:
  using FactorPtr = std::shared_ptr<const Factor>;

  FactorGraph& add(FactorPtr factor);

  template <typename F, typename... Args>
  FactorGraph& emplace(Args&&... args) {
    return add(std::make_shared<const F>(std::forward<Args>(args)...));
  }

  std::size_t size() const { return factors_.size(); }
  bool empty() const { return factors_.empty(); }
  const FactorPtr& operator[](std::size_t i) const { return factors_[i]; }
  const FactorPtr& at(std::size_t i) const { return factors_.at(i); }

  void replace(std::size_t i, FactorPtr factor);
  void erase(std::size_t i);

  // Sum of factor residual dimensions.
  int residualDim() const;

  auto begin() const { return factors_.begin(); }
  auto end() const { return factors_.end(); }

 private:
  std::vector<FactorPtr> factors_;
};

// sum_i rho_i(||R_i f_i(x_i)||^2), no 1/2 factor. Throws MissingKeyError or
// DimensionMismatch (with the factor index).
double totalCost(const FactorGraph& graph, const Variables& values);

// Evaluates factor i and checks its error length against dim().
Eigen::VectorXd checkedError(const FactorGraph& graph, std::size_t i, const Variables& values);

// Sorted unique keys referenced by any factor.
std::vector<Key> defaultOrdering(const FactorGraph& graph);

// One-line summary, e.g. "6 factors, 5 variables, residual dim 18".
void printSummary(std::ostream& os, const FactorGraph& graph);

}  // namespace fgraph
