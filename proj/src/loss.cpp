#include "fgraph/loss.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "fgraph/errors.hpp"

namespace fgraph {

RobustKernel RobustKernel::huber(double k) {
  if (!(k > 0.0)) throw ContractViolation("huber parameter must be positive");
  return {Kind::Huber, k};
}

RobustKernel RobustKernel::cauchy(double k) {
  if (!(k > 0.0)) throw ContractViolation("cauchy parameter must be positive");
  return {Kind::Cauchy, k};
}

double RobustKernel::weight(double rnorm) const {
  switch (kind) {
    case Kind::Huber:
      return rnorm <= k ? 1.0 : k / rnorm;
    case Kind::Cauchy: {
      const double u = rnorm / k;
      return 1.0 / (1.0 + u * u);
    }
    case Kind::None:
      break;
  }
  return 1.0;
}

double RobustKernel::rho(double s) const {
  switch (kind) {
    case Kind::Huber: {
      const double r = std::sqrt(s);
      return r <= k ? s : 2.0 * k * r - k * k;
    }
    case Kind::Cauchy:
      return k * k * std::log1p(s / (k * k));
    case Kind::None:
      break;
  }
  return s;
}

std::string_view to_string(RobustKernel::Kind kind) {
  switch (kind) {
    case RobustKernel::Kind::Huber:
      return "huber";
    case RobustKernel::Kind::Cauchy:
      return "cauchy";
    case RobustKernel::Kind::None:
      break;
  }
  return "none";
}

std::optional<RobustKernel::Kind> parse_kernel_kind(std::string_view name) {
  if (name == "none") return RobustKernel::Kind::None;
  if (name == "huber") return RobustKernel::Kind::Huber;
  if (name == "cauchy") return RobustKernel::Kind::Cauchy;
  return std::nullopt;
}

std::shared_ptr<const LossFunction> LossFunction::unit(int dim) {
  return std::shared_ptr<const LossFunction>(
      new LossFunction(Eigen::MatrixXd::Identity(dim, dim), true, {}));
}

std::shared_ptr<const LossFunction> LossFunction::sigmas(const Eigen::VectorXd& sigmas) {
  for (Eigen::Index i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0)) {
      throw ContractViolation("sigma " + std::to_string(i) + " is not positive");
    }
  }
  Eigen::MatrixXd R = sigmas.cwiseInverse().asDiagonal();
  return std::shared_ptr<const LossFunction>(new LossFunction(std::move(R), true, {}));
}

std::shared_ptr<const LossFunction> LossFunction::covariance(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols()) throw ContractViolation("covariance must be square");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw ContractViolation("covariance is not symmetric positive definite");
  }
  const Eigen::MatrixXd info =
      llt.solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
  return information(0.5 * (info + info.transpose()));
}

std::shared_ptr<const LossFunction> LossFunction::information(const Eigen::MatrixXd& info) {
  if (info.rows() != info.cols()) throw ContractViolation("information must be square");
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() != Eigen::Success) {
    throw ContractViolation("information matrix is not symmetric positive definite");
  }
  Eigen::MatrixXd R = llt.matrixU();
  const bool diagonal = info.isDiagonal(0.0);
  return std::shared_ptr<const LossFunction>(new LossFunction(std::move(R), diagonal, {}));
}

std::shared_ptr<const LossFunction> LossFunction::withKernel(const RobustKernel& kernel) const {
  return std::shared_ptr<const LossFunction>(new LossFunction(sqrt_info_, diagonal_, kernel));
}

void LossFunction::checkSize(Eigen::Index n) const {
  if (n != sqrt_info_.rows()) {
    throw ContractViolation("loss of dimension " + std::to_string(sqrt_info_.rows()) +
                            " applied to vector of length " + std::to_string(n));
  }
}

Eigen::VectorXd LossFunction::whitenRaw(const Eigen::VectorXd& v) const {
  checkSize(v.size());
  if (diagonal_) return sqrt_info_.diagonal().cwiseProduct(v);
  return sqrt_info_.triangularView<Eigen::Upper>() * v;
}

Eigen::VectorXd LossFunction::whitenError(const Eigen::VectorXd& v) const {
  Eigen::VectorXd r = whitenRaw(v);
  if (kernel_.kind != RobustKernel::Kind::None) r *= std::sqrt(kernel_.weight(r.norm()));
  return r;
}

void LossFunction::whitenSystem(std::vector<Eigen::MatrixXd>& blocks, Eigen::VectorXd& v) const {
  Eigen::VectorXd r = whitenRaw(v);
  double scale = 1.0;
  if (kernel_.kind != RobustKernel::Kind::None) scale = std::sqrt(kernel_.weight(r.norm()));
  for (auto& block : blocks) {
    checkSize(block.rows());
    if (diagonal_) {
      block = sqrt_info_.diagonal().asDiagonal() * block;
    } else {
      block = sqrt_info_.triangularView<Eigen::Upper>() * block;
    }
    if (scale != 1.0) block *= scale;
  }
  if (scale != 1.0) r *= scale;
  v = std::move(r);
}

double LossFunction::cost(const Eigen::VectorXd& v) const {
  return kernel_.rho(whitenRaw(v).squaredNorm());
}

}  // namespace fgraph
