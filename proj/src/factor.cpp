#include "fgraph/factor.hpp"

#include <string>

#include "fgraph/errors.hpp"

namespace fgraph {

Factor::Factor(int dim, std::vector<Key> keys, std::shared_ptr<const LossFunction> loss)
    : dim_(dim), keys_(std::move(keys)), loss_(std::move(loss)) {
  if (dim_ <= 0) throw ContractViolation("factor dimension must be positive");
  if (loss_ && loss_->dim() != dim_) {
    throw ContractViolation("loss dimension " + std::to_string(loss_->dim()) +
                            " does not match factor dimension " + std::to_string(dim_));
  }
}

std::shared_ptr<Factor> Factor::withLoss(std::shared_ptr<const LossFunction> loss) const {
  if (loss && loss->dim() != dim_) {
    throw ContractViolation("loss dimension does not match factor dimension");
  }
  auto copy = clone();
  copy->loss_ = std::move(loss);
  return copy;
}

double Factor::cost(const Variables& values) const {
  const Eigen::VectorXd e = error(values);
  if (e.size() != dim_) {
    throw ContractViolation("error has length " + std::to_string(e.size()) + ", expected " +
                            std::to_string(dim_));
  }
  return loss_ ? loss_->cost(e) : e.squaredNorm();
}

std::vector<Eigen::MatrixXd> numericalJacobians(const Factor& factor, const Variables& values,
                                                double step) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(factor.keys().size());
  Variables probe = values;
  for (const Key& k : factor.keys()) {
    const Value& x = values.at(k);
    const int n = x.dim();
    Eigen::MatrixXd J(factor.dim(), n);
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
    for (int c = 0; c < n; ++c) {
      delta[c] = step;
      probe.update(k, x.retract(delta));
      const Eigen::VectorXd plus = factor.error(probe);
      delta[c] = -step;
      probe.update(k, x.retract(delta));
      const Eigen::VectorXd minus = factor.error(probe);
      delta[c] = 0.0;
      J.col(c) = (plus - minus) / (2.0 * step);
    }
    probe.update(k, x);
    out.push_back(std::move(J));
  }
  return out;
}

LinearFactor::LinearFactor(std::vector<Key> keys, std::vector<Eigen::MatrixXd> blocks,
                           Eigen::VectorXd rhs, std::shared_ptr<const LossFunction> loss)
    : Factor(static_cast<int>(rhs.size()), std::move(keys), std::move(loss)),
      blocks_(std::move(blocks)),
      rhs_(std::move(rhs)) {
  if (blocks_.size() != this->keys().size()) {
    throw ContractViolation("linear factor needs one block per key");
  }
  for (const auto& b : blocks_) {
    if (b.rows() != rhs_.size()) throw ContractViolation("linear factor block row mismatch");
  }
}

Eigen::VectorXd LinearFactor::error(const Variables& values) const {
  Eigen::VectorXd e = -rhs_;
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const auto& x = values.at<Eigen::VectorXd>(keys()[j]);
    if (x.size() != blocks_[j].cols()) {
      throw ContractViolation("linear factor: variable " + keys()[j].str() + " has wrong size");
    }
    e.noalias() += blocks_[j] * x;
  }
  return e;
}

std::vector<Eigen::MatrixXd> LinearFactor::jacobians(const Variables&) const { return blocks_; }

}  // namespace fgraph
