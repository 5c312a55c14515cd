#pragma once

// SO(2), SE(2), SO(3), SE(3).
//
// Perturbations are applied on the right: x (+) d = x * exp(d), and
// local(x, y) = log(x^-1 * y). Tangent orderings:
//   Rot2  : (w)
//   Pose2 : (v_x, v_y, w)
//   Rot3  : (w_x, w_y, w_z)
//   Pose3 : (v_x, v_y, v_z, w_x, w_y, w_z)   translation part first

#include <ostream>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "fgraph/manifold.hpp"

namespace fgraph {

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

class Rot2 {
 public:
  static constexpr int DoF = 1;
  using Tangent = Eigen::Matrix<double, 1, 1>;

  Rot2() = default;
  // Angle in radians; stored wrapped to (-pi, pi].
  explicit Rot2(double theta);

  static Rot2 identity() { return Rot2(); }
  static Rot2 exp(const Tangent& w) { return Rot2(w[0]); }

  double theta() const { return theta_; }
  Eigen::Matrix2d matrix() const;

  Rot2 operator*(const Rot2& other) const { return Rot2(theta_ + other.theta_); }
  Eigen::Vector2d operator*(const Eigen::Vector2d& p) const { return matrix() * p; }
  Rot2 inverse() const { return Rot2(-theta_); }
  Tangent log() const { return Tangent::Constant(theta_); }
  Eigen::Matrix<double, 1, 1> adjoint() const { return Eigen::Matrix<double, 1, 1>::Identity(); }

  static Eigen::Matrix<double, 1, 1> rightJacobianInverse(const Tangent&) {
    return Eigen::Matrix<double, 1, 1>::Identity();
  }

 private:
  double theta_ = 0.0;
};

class Pose2 {
 public:
  static constexpr int DoF = 3;
  using Tangent = Eigen::Vector3d;

  Pose2() = default;
  Pose2(const Rot2& r, const Eigen::Vector2d& t) : rotation_(r), translation_(t) {}
  Pose2(double x, double y, double theta) : rotation_(theta), translation_(x, y) {}

  static Pose2 identity() { return Pose2(); }
  static Pose2 exp(const Tangent& xi);

  const Rot2& rotation() const { return rotation_; }
  const Eigen::Vector2d& translation() const { return translation_; }
  double x() const { return translation_.x(); }
  double y() const { return translation_.y(); }
  double theta() const { return rotation_.theta(); }

  Eigen::Matrix3d matrix() const;

  Pose2 operator*(const Pose2& other) const;
  Eigen::Vector2d operator*(const Eigen::Vector2d& p) const;
  Pose2 inverse() const;
  Tangent log() const;
  Eigen::Matrix3d adjoint() const;

  static Eigen::Matrix3d rightJacobian(const Tangent& xi);
  static Eigen::Matrix3d rightJacobianInverse(const Tangent& xi);

 private:
  Rot2 rotation_;
  Eigen::Vector2d translation_ = Eigen::Vector2d::Zero();
};

class Rot3 {
 public:
  static constexpr int DoF = 3;
  using Tangent = Eigen::Vector3d;

  Rot3() = default;
  // Normalizes and canonicalizes to w >= 0.
  explicit Rot3(const Eigen::Quaterniond& q);
  Rot3(double w, double x, double y, double z) : Rot3(Eigen::Quaterniond(w, x, y, z)) {}
  static Rot3 fromMatrix(const Eigen::Matrix3d& R);

  static Rot3 identity() { return Rot3(); }
  static Rot3 exp(const Tangent& w);

  const Eigen::Quaterniond& quaternion() const { return q_; }
  Eigen::Matrix3d matrix() const { return q_.toRotationMatrix(); }

  Rot3 operator*(const Rot3& other) const { return Rot3(q_ * other.q_); }
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return q_ * p; }
  Rot3 inverse() const { return Rot3(q_.conjugate()); }
  // Principal branch; precision degrades for angles above pi - 1e-7.
  Tangent log() const;
  Eigen::Matrix3d adjoint() const { return matrix(); }

  static Eigen::Matrix3d leftJacobian(const Tangent& w);
  static Eigen::Matrix3d leftJacobianInverse(const Tangent& w);
  static Eigen::Matrix3d rightJacobian(const Tangent& w) { return leftJacobian(-w); }
  static Eigen::Matrix3d rightJacobianInverse(const Tangent& w) { return leftJacobianInverse(-w); }

 private:
  Eigen::Quaterniond q_ = Eigen::Quaterniond::Identity();
};

class Pose3 {
 public:
  static constexpr int DoF = 6;
  using Tangent = Eigen::Matrix<double, 6, 1>;
  using Matrix6 = Eigen::Matrix<double, 6, 6>;

  Pose3() = default;
  Pose3(const Rot3& r, const Eigen::Vector3d& t) : rotation_(r), translation_(t) {}

  static Pose3 identity() { return Pose3(); }
  static Pose3 exp(const Tangent& xi);

  const Rot3& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }
  Eigen::Matrix4d matrix() const;

  Pose3 operator*(const Pose3& other) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const;
  Pose3 inverse() const;
  Tangent log() const;
  Matrix6 adjoint() const;

  static Matrix6 leftJacobian(const Tangent& xi);
  static Matrix6 rightJacobian(const Tangent& xi) { return leftJacobian(-xi); }
  static Matrix6 rightJacobianInverse(const Tangent& xi);

 private:
  Rot3 rotation_;
  Eigen::Vector3d translation_ = Eigen::Vector3d::Zero();
};

std::ostream& operator<<(std::ostream& os, const Rot2& r);
std::ostream& operator<<(std::ostream& os, const Pose2& p);
std::ostream& operator<<(std::ostream& os, const Rot3& r);
std::ostream& operator<<(std::ostream& os, const Pose3& p);

// Group interface used by the generic prior/between factors. Lie group
// classes satisfy it through their members; Eigen vectors form the additive
// group.
template <typename G>
struct lie_traits {
  static G compose(const G& a, const G& b) { return a * b; }
  static G inverse(const G& a) { return a.inverse(); }
  static Eigen::VectorXd log(const G& a) { return a.log(); }
  static Eigen::MatrixXd adjoint(const G& a) { return a.adjoint(); }
  static Eigen::MatrixXd rightJacobianInverse(const Eigen::VectorXd& xi) {
    return G::rightJacobianInverse(xi);
  }
};

template <>
struct lie_traits<Eigen::VectorXd> {
  static Eigen::VectorXd compose(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw ContractViolation("vector compose: size mismatch");
    return a + b;
  }
  static Eigen::VectorXd inverse(const Eigen::VectorXd& a) { return -a; }
  static Eigen::VectorXd log(const Eigen::VectorXd& a) { return a; }
  static Eigen::MatrixXd adjoint(const Eigen::VectorXd& a) {
    return Eigen::MatrixXd::Identity(a.size(), a.size());
  }
  static Eigen::MatrixXd rightJacobianInverse(const Eigen::VectorXd& xi) {
    return Eigen::MatrixXd::Identity(xi.size(), xi.size());
  }
};

template <typename G>
concept LieGroup = requires(const G& a) {
  { lie_traits<G>::compose(a, a) } -> std::convertible_to<G>;
  { lie_traits<G>::inverse(a) } -> std::convertible_to<G>;
  { lie_traits<G>::log(a) } -> std::convertible_to<Eigen::VectorXd>;
};

// Manifold structure of the fixed-size groups.
template <typename G>
  requires requires { G::DoF; typename G::Tangent; }
struct manifold_traits<G> {
  static int dim(const G&) { return G::DoF; }
  static Eigen::VectorXd local(const G& base, const G& other) {
    return (base.inverse() * other).log();
  }
  static G retract(const G& base, const Eigen::VectorXd& delta) {
    if (delta.size() != G::DoF) throw ContractViolation("retract: tangent size mismatch");
    return base * G::exp(delta);
  }
};

}  // namespace fgraph
