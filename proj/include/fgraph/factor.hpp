#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "fgraph/key.hpp"
#include "fgraph/loss.hpp"
#include "fgraph/variables.hpp"

namespace fgraph {

// A residual term f_i(x_i) over the variables named by keys(). error() and
// jacobians() are pure functions of the referenced variables; Jacobians are
// taken with respect to the right-perturbation chart of each variable and are
// returned unwhitened (the linearizer applies the loss).
class Factor {
 public:
  Factor(int dim, std::vector<Key> keys, std::shared_ptr<const LossFunction> loss = nullptr);
  virtual ~Factor() = default;

  int dim() const { return dim_; }
  const std::vector<Key>& keys() const { return keys_; }
  // May be null (unit weight).
  const std::shared_ptr<const LossFunction>& loss() const { return loss_; }

  virtual Eigen::VectorXd error(const Variables& values) const = 0;
  // One dim() x dim(values[keys[j]]) matrix per key.
  virtual std::vector<Eigen::MatrixXd> jacobians(const Variables& values) const = 0;

  virtual std::shared_ptr<Factor> clone() const = 0;

  // Copy of this factor with a different loss.
  std::shared_ptr<Factor> withLoss(std::shared_ptr<const LossFunction> loss) const;

  // rho(||R f||^2), or ||f||^2 without a loss.
  double cost(const Variables& values) const;

 private:
  int dim_;
  std::vector<Key> keys_;
  std::shared_ptr<const LossFunction> loss_;
};

inline constexpr double kNumericalJacobianStep = 1e-5;

// Central differences in the chart of each variable:
//   col k of block j = (f(x_j (+) h e_k) - f(x_j (+) -h e_k)) / 2h
std::vector<Eigen::MatrixXd> numericalJacobians(const Factor& factor, const Variables& values,
                                                double step = kNumericalJacobianStep);

// Base for factors that only define error(); Jacobians come from central
// differences.
class NumericalFactor : public Factor {
 public:
  using Factor::Factor;

  std::vector<Eigen::MatrixXd> jacobians(const Variables& values) const override {
    return numericalJacobians(*this, values);
  }
};

// f(x) = sum_j A_j x_j - b over vector-valued variables.
class LinearFactor : public Factor {
 public:
  LinearFactor(std::vector<Key> keys, std::vector<Eigen::MatrixXd> blocks, Eigen::VectorXd rhs,
               std::shared_ptr<const LossFunction> loss = nullptr);

  Eigen::VectorXd error(const Variables& values) const override;
  std::vector<Eigen::MatrixXd> jacobians(const Variables& values) const override;
  std::shared_ptr<Factor> clone() const override { return std::make_shared<LinearFactor>(*this); }

  const std::vector<Eigen::MatrixXd>& blocks() const { return blocks_; }
  const Eigen::VectorXd& rhs() const { return rhs_; }

 private:
  std::vector<Eigen::MatrixXd> blocks_;
  Eigen::VectorXd rhs_;
};

}  // namespace fgraph
