#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace fgraph {

// Robust reweighting on the whitened residual norm r = ||R f||.
//   huber : w = 1 for r <= k, k / r otherwise;  rho(s) = s or 2 k sqrt(s) - k^2
//   cauchy: w = 1 / (1 + (r/k)^2);              rho(s) = k^2 log(1 + s / k^2)
// with s = r^2 and w = d rho / d s.
struct RobustKernel {
  enum class Kind { None, Huber, Cauchy };

  static constexpr double kDefaultHuber = 1.345;
  static constexpr double kDefaultCauchy = 1.0;

  Kind kind = Kind::None;
  double k = 1.0;

  static RobustKernel none() { return {}; }
  static RobustKernel huber(double k = kDefaultHuber);
  static RobustKernel cauchy(double k = kDefaultCauchy);

  double weight(double rnorm) const;
  double rho(double squared_norm) const;
};

std::string_view to_string(RobustKernel::Kind kind);
std::optional<RobustKernel::Kind> parse_kernel_kind(std::string_view name);

// Whitening by the upper-triangular square-root information R (R^T R =
// Sigma^-1), optionally followed by a robust kernel. Immutable; factors hold
// it through shared_ptr<const LossFunction>.
class LossFunction {
 public:
  static std::shared_ptr<const LossFunction> unit(int dim);
  // R = diag(1 / sigma_i). Throws ContractViolation for sigma_i <= 0.
  static std::shared_ptr<const LossFunction> sigmas(const Eigen::VectorXd& sigmas);
  // R = chol(Sigma^-1). Throws ContractViolation if Sigma is not SPD.
  static std::shared_ptr<const LossFunction> covariance(const Eigen::MatrixXd& sigma);
  // R = chol(information) taken directly, no inversion.
  static std::shared_ptr<const LossFunction> information(const Eigen::MatrixXd& info);

  std::shared_ptr<const LossFunction> withKernel(const RobustKernel& kernel) const;

  int dim() const { return static_cast<int>(sqrt_info_.rows()); }
  bool isDiagonal() const { return diagonal_; }
  const Eigen::MatrixXd& sqrtInformation() const { return sqrt_info_; }
  Eigen::MatrixXd informationMatrix() const { return sqrt_info_.transpose() * sqrt_info_; }
  const RobustKernel& kernel() const { return kernel_; }

  // R v, without the robust weight.
  Eigen::VectorXd whitenRaw(const Eigen::VectorXd& v) const;

  // sqrt(w) R v
  Eigen::VectorXd whitenError(const Eigen::VectorXd& v) const;

  // Applies the same transform as whitenError to every block and to v.
  void whitenSystem(std::vector<Eigen::MatrixXd>& blocks, Eigen::VectorXd& v) const;

  // rho(||R v||^2); the plain squared norm without a kernel.
  double cost(const Eigen::VectorXd& v) const;

 private:
  LossFunction(Eigen::MatrixXd sqrt_info, bool diagonal, RobustKernel kernel)
      : sqrt_info_(std::move(sqrt_info)), diagonal_(diagonal), kernel_(kernel) {}

  void checkSize(Eigen::Index n) const;

  Eigen::MatrixXd sqrt_info_;
  bool diagonal_ = false;
  RobustKernel kernel_;
};

}  // namespace fgraph
