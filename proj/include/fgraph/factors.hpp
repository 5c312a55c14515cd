#pragma once

// Built-in unary prior and binary relative-measurement factors over any group
// with lie_traits (Rot2, Pose2, Rot3, Pose3, Eigen::VectorXd).

#include <memory>
#include <utility>

#include "fgraph/errors.hpp"
#include "fgraph/factor.hpp"
#include "fgraph/lie.hpp"

namespace fgraph {

// f(x) = log(prior^-1 * x)
template <typename T>
  requires LieGroup<T> && Manifold<T>
class PriorFactor : public Factor {
 public:
  PriorFactor(const Key& k, T prior, std::shared_ptr<const LossFunction> loss = nullptr)
      : Factor(manifold_traits<T>::dim(prior), {k}, std::move(loss)), prior_(std::move(prior)) {}

  const T& prior() const { return prior_; }

  Eigen::VectorXd error(const Variables& values) const override {
    const T& x = values.at<T>(keys()[0]);
    return G::log(G::compose(G::inverse(prior_), x));
  }

  // d log(prior^-1 x exp(d)) / dd = Jr^-1(e)
  std::vector<Eigen::MatrixXd> jacobians(const Variables& values) const override {
    return {G::rightJacobianInverse(error(values))};
  }

  std::shared_ptr<Factor> clone() const override { return std::make_shared<PriorFactor>(*this); }

 private:
  using G = lie_traits<T>;
  T prior_;
};

// f(x1, x2) = log(measured^-1 * (x1^-1 * x2)); `measured` is the pose of
// frame 2 expressed in frame 1.
template <typename T>
  requires LieGroup<T> && Manifold<T>
class BetweenFactor : public Factor {
 public:
  BetweenFactor(const Key& k1, const Key& k2, T measured,
                std::shared_ptr<const LossFunction> loss = nullptr)
      : Factor(manifold_traits<T>::dim(measured), {k1, k2}, std::move(loss)),
        measured_(std::move(measured)) {
    if (k1 == k2) throw ContractViolation("between factor needs two distinct keys");
  }

  const T& measured() const { return measured_; }

  Eigen::VectorXd error(const Variables& values) const override {
    const T& x1 = values.at<T>(keys()[0]);
    const T& x2 = values.at<T>(keys()[1]);
    return G::log(G::compose(G::inverse(measured_), G::compose(G::inverse(x1), x2)));
  }

  // Perturbing x2 on the right:  Jr^-1(e)
  // Perturbing x1 on the right: -Jr^-1(e) Ad(x2^-1 x1)
  std::vector<Eigen::MatrixXd> jacobians(const Variables& values) const override {
    const T& x1 = values.at<T>(keys()[0]);
    const T& x2 = values.at<T>(keys()[1]);
    const Eigen::VectorXd e =
        G::log(G::compose(G::inverse(measured_), G::compose(G::inverse(x1), x2)));
    const Eigen::MatrixXd jr_inv = G::rightJacobianInverse(e);
    const Eigen::MatrixXd ad = G::adjoint(G::compose(G::inverse(x2), x1));
    return {-jr_inv * ad, jr_inv};
  }

  std::shared_ptr<Factor> clone() const override { return std::make_shared<BetweenFactor>(*this); }

 private:
  using G = lie_traits<T>;
  T measured_;
};

}  // namespace fgraph
