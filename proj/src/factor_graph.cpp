#include "fgraph/factor_graph.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "fgraph/errors.hpp"

namespace fgraph {

FactorGraph& FactorGraph::add(FactorPtr factor) {
  if (!factor) throw ContractViolation("cannot add a null factor");
  factors_.push_back(std::move(factor));
  return *this;
}

void FactorGraph::replace(std::size_t i, FactorPtr factor) {
  if (!factor) throw ContractViolation("cannot add a null factor");
  factors_.at(i) = std::move(factor);
}

void FactorGraph::erase(std::size_t i) {
  if (i >= factors_.size()) throw ContractViolation("factor index out of range");
  factors_.erase(factors_.begin() + static_cast<std::ptrdiff_t>(i));
}

int FactorGraph::residualDim() const {
  int total = 0;
  for (const auto& f : factors_) total += f->dim();
  return total;
}

Eigen::VectorXd checkedError(const FactorGraph& graph, std::size_t i, const Variables& values) {
  const Factor& f = *graph[i];
  Eigen::VectorXd e;
  try {
    e = f.error(values);
  } catch (const MissingKeyError&) {
    throw;
  } catch (const ContractViolation& ex) {
    throw DimensionMismatch(i, ex.what());
  }
  if (e.size() != f.dim()) {
    throw DimensionMismatch(i, "error has length " + std::to_string(e.size()) +
                                   ", declared dimension " + std::to_string(f.dim()));
  }
  return e;
}

double totalCost(const FactorGraph& graph, const Variables& values) {
  double total = 0.0;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const Eigen::VectorXd e = checkedError(graph, i, values);
    const auto& loss = graph[i]->loss();
    total += loss ? loss->cost(e) : e.squaredNorm();
  }
  return total;
}

std::vector<Key> defaultOrdering(const FactorGraph& graph) {
  std::set<Key> keys;
  for (const auto& f : graph) keys.insert(f->keys().begin(), f->keys().end());
  return {keys.begin(), keys.end()};
}

void printSummary(std::ostream& os, const FactorGraph& graph) {
  os << graph.size() << " factors, " << defaultOrdering(graph).size() << " variables, residual dim "
     << graph.residualDim();
}

}  // namespace fgraph
