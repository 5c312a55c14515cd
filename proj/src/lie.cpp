#include "fgraph/lie.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace fgraph {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this angle exp/log/V use second-order series.
constexpr double kSmallAngle = 1e-10;
// Below this angle the Jacobian coefficient functions use series; the closed
// forms lose relative precision from cancellation well before kSmallAngle.
constexpr double kSeriesAngle = 1e-2;

double wrapAngle(double theta) {
  double r = std::remainder(theta, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

// sin(t)/t
double sinc(double t) {
  if (std::abs(t) < kSeriesAngle) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

// (1 - cos t)/t^2, computed as 2 sin^2(t/2)/t^2 to avoid cancellation.
double oneMinusCosOverT2(double t) {
  const double s = sinc(0.5 * t);
  return 0.5 * s * s;
}

// (t - sin t)/t^3
double tMinusSinOverT3(double t) {
  if (std::abs(t) < kSeriesAngle) {
    const double t2 = t * t;
    return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  }
  return (t - std::sin(t)) / (t * t * t);
}

}  // namespace

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  // clang-format off
  s <<     0.0, -v.z(),  v.y(),
         v.z(),    0.0, -v.x(),
        -v.y(),  v.x(),    0.0;
  // clang-format on
  return s;
}

// ---------------------------------------------------------------- Rot2

Rot2::Rot2(double theta) : theta_(wrapAngle(theta)) {}

Eigen::Matrix2d Rot2::matrix() const {
  const double c = std::cos(theta_), s = std::sin(theta_);
  Eigen::Matrix2d R;
  R << c, -s, s, c;
  return R;
}

// ---------------------------------------------------------------- Pose2

namespace {

// V(w) with exp((v, w)).translation = V(w) v.
Eigen::Matrix2d pose2V(double w) {
  const double a = sinc(w);
  const double b = w * oneMinusCosOverT2(w);  // (1 - cos w)/w
  Eigen::Matrix2d V;
  V << a, -b, b, a;
  return V;
}

}  // namespace

Pose2 Pose2::exp(const Tangent& xi) {
  const double w = xi[2];
  if (std::abs(w) < kSmallAngle) {
    // V ~ I + w/2 [0 -1; 1 0]
    const Eigen::Vector2d t(xi[0] - 0.5 * w * xi[1], xi[1] + 0.5 * w * xi[0]);
    return Pose2(Rot2(w), t);
  }
  return Pose2(Rot2(w), pose2V(w) * xi.head<2>());
}

Pose2::Tangent Pose2::log() const {
  const double w = theta();
  Tangent xi;
  xi[2] = w;
  if (std::abs(w) < kSmallAngle) {
    xi[0] = translation_.x() + 0.5 * w * translation_.y();
    xi[1] = translation_.y() - 0.5 * w * translation_.x();
    return xi;
  }
  // V is a scaled rotation, V^-1 = V^T / det.
  const Eigen::Matrix2d V = pose2V(w);
  const double det = V(0, 0) * V(0, 0) + V(1, 0) * V(1, 0);
  xi.head<2>() = V.transpose() * translation_ / det;
  return xi;
}

Eigen::Matrix3d Pose2::matrix() const {
  Eigen::Matrix3d T = Eigen::Matrix3d::Identity();
  T.topLeftCorner<2, 2>() = rotation_.matrix();
  T.topRightCorner<2, 1>() = translation_;
  return T;
}

Pose2 Pose2::operator*(const Pose2& other) const {
  return Pose2(rotation_ * other.rotation_, translation_ + rotation_ * other.translation_);
}

Eigen::Vector2d Pose2::operator*(const Eigen::Vector2d& p) const {
  return translation_ + rotation_ * p;
}

Pose2 Pose2::inverse() const {
  const Rot2 rinv = rotation_.inverse();
  return Pose2(rinv, -(rinv * translation_));
}

Eigen::Matrix3d Pose2::adjoint() const {
  Eigen::Matrix3d A = Eigen::Matrix3d::Identity();
  A.topLeftCorner<2, 2>() = rotation_.matrix();
  A(0, 2) = translation_.y();
  A(1, 2) = -translation_.x();
  return A;
}

Eigen::Matrix3d Pose2::rightJacobian(const Tangent& xi) {
  const double w = xi[2], r1 = xi[0], r2 = xi[1];
  const double a = sinc(w);                    // sin w / w
  const double b = w * oneMinusCosOverT2(w);   // (1 - cos w) / w
  const double c = w * tMinusSinOverT3(w);     // (w - sin w) / w^2
  const double d = oneMinusCosOverT2(w);       // (1 - cos w) / w^2
  Eigen::Matrix3d J = Eigen::Matrix3d::Identity();
  J(0, 0) = a;
  J(0, 1) = b;
  J(1, 0) = -b;
  J(1, 1) = a;
  J(0, 2) = r1 * c - r2 * d;
  J(1, 2) = r1 * d + r2 * c;
  return J;
}

Eigen::Matrix3d Pose2::rightJacobianInverse(const Tangent& xi) {
  const Eigen::Matrix3d J = rightJacobian(xi);
  // J = [A b; 0 1] with A a scaled rotation.
  const Eigen::Matrix2d A = J.topLeftCorner<2, 2>();
  const double det = A(0, 0) * A(0, 0) + A(0, 1) * A(0, 1);
  const Eigen::Matrix2d Ainv = A.transpose() / det;
  Eigen::Matrix3d Jinv = Eigen::Matrix3d::Identity();
  Jinv.topLeftCorner<2, 2>() = Ainv;
  Jinv.topRightCorner<2, 1>() = -Ainv * J.topRightCorner<2, 1>();
  return Jinv;
}

// ---------------------------------------------------------------- Rot3

Rot3::Rot3(const Eigen::Quaterniond& q) : q_(q) {
  // Leave quaternions that are already unit to within rounding untouched, so
  // a written and re-read rotation keeps its exact digits.
  if (std::abs(q_.squaredNorm() - 1.0) > 4 * std::numeric_limits<double>::epsilon()) q_.normalize();
  if (q_.w() < 0.0) q_.coeffs() = -q_.coeffs();
}

Rot3 Rot3::fromMatrix(const Eigen::Matrix3d& R) {
  // Eigen selects the largest diagonal term, which keeps the conversion
  // well conditioned near 180 degrees.
  return Rot3(Eigen::Quaterniond(R));
}

Rot3 Rot3::exp(const Tangent& w) {
  const double theta = w.norm();
  if (theta < kSmallAngle) {
    return Rot3(Eigen::Quaterniond(1.0 - theta * theta / 8.0, 0.5 * w.x(), 0.5 * w.y(),
                                   0.5 * w.z()));
  }
  const double half = 0.5 * theta;
  const Eigen::Vector3d v = w * (std::sin(half) / theta);
  return Rot3(Eigen::Quaterniond(std::cos(half), v.x(), v.y(), v.z()));
}

Rot3::Tangent Rot3::log() const {
  const Eigen::Vector3d v = q_.vec();
  const double n = v.norm();
  const double w = q_.w();  // >= 0 by construction
  if (n < kSmallAngle) {
    // theta/n ~ 2/w (1 - n^2 / (3 w^2))
    return v * (2.0 / w) * (1.0 - n * n / (3.0 * w * w));
  }
  const double theta = 2.0 * std::atan2(n, w);
  return v * (theta / n);
}

Eigen::Matrix3d Rot3::leftJacobian(const Tangent& w) {
  const double theta = w.norm();
  const Eigen::Matrix3d W = skew(w);
  return Eigen::Matrix3d::Identity() + oneMinusCosOverT2(theta) * W +
         tMinusSinOverT3(theta) * W * W;
}

Eigen::Matrix3d Rot3::leftJacobianInverse(const Tangent& w) {
  const double theta = w.norm();
  const Eigen::Matrix3d W = skew(w);
  double coef;
  if (theta < kSeriesAngle) {
    const double t2 = theta * theta;
    coef = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    coef = 1.0 / (theta * theta) - (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  }
  return Eigen::Matrix3d::Identity() - 0.5 * W + coef * W * W;
}

// ---------------------------------------------------------------- Pose3

namespace {

// Translation/rotation coupling block of the SE(3) left Jacobian.
Eigen::Matrix3d se3Q(const Eigen::Vector3d& rho, const Eigen::Vector3d& phi) {
  const double theta = phi.norm();
  const Eigen::Matrix3d P = skew(phi);
  const Eigen::Matrix3d Rr = skew(rho);
  double c1, c2, c3;
  if (theta < kSeriesAngle) {
    const double t2 = theta * theta;
    c1 = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
    c2 = 1.0 / 24.0 - t2 / 720.0 + t2 * t2 / 40320.0;
    c3 = 1.0 / 120.0 - t2 / 2520.0 + t2 * t2 / 120960.0;
  } else {
    const double s = std::sin(theta), c = std::cos(theta);
    const double t2 = theta * theta;
    c1 = (theta - s) / (t2 * theta);
    c2 = (t2 + 2.0 * c - 2.0) / (2.0 * t2 * t2);
    c3 = (2.0 * theta - 3.0 * s + theta * c) / (2.0 * t2 * t2 * theta);
  }
  const Eigen::Matrix3d PR = P * Rr;
  const Eigen::Matrix3d RP = Rr * P;
  const Eigen::Matrix3d PRP = PR * P;
  const Eigen::Matrix3d PP = P * P;
  return 0.5 * Rr + c1 * (PR + RP + PRP) + c2 * (PP * Rr + RP * P - 3.0 * PRP) +
         c3 * (PRP * P + PP * RP);
}

}  // namespace

Pose3 Pose3::exp(const Tangent& xi) {
  const Eigen::Vector3d rho = xi.head<3>();
  const Eigen::Vector3d phi = xi.tail<3>();
  return Pose3(Rot3::exp(phi), Rot3::leftJacobian(phi) * rho);
}

Pose3::Tangent Pose3::log() const {
  const Eigen::Vector3d phi = rotation_.log();
  Tangent xi;
  xi.head<3>() = Rot3::leftJacobianInverse(phi) * translation_;
  xi.tail<3>() = phi;
  return xi;
}

Eigen::Matrix4d Pose3::matrix() const {
  Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
  T.topLeftCorner<3, 3>() = rotation_.matrix();
  T.topRightCorner<3, 1>() = translation_;
  return T;
}

Pose3 Pose3::operator*(const Pose3& other) const {
  return Pose3(rotation_ * other.rotation_, translation_ + rotation_ * other.translation_);
}

Eigen::Vector3d Pose3::operator*(const Eigen::Vector3d& p) const {
  return translation_ + rotation_ * p;
}

Pose3 Pose3::inverse() const {
  const Rot3 rinv = rotation_.inverse();
  return Pose3(rinv, -(rinv * translation_));
}

Pose3::Matrix6 Pose3::adjoint() const {
  const Eigen::Matrix3d R = rotation_.matrix();
  Matrix6 A = Matrix6::Zero();
  A.topLeftCorner<3, 3>() = R;
  A.topRightCorner<3, 3>() = skew(translation_) * R;
  A.bottomRightCorner<3, 3>() = R;
  return A;
}

Pose3::Matrix6 Pose3::leftJacobian(const Tangent& xi) {
  const Eigen::Vector3d rho = xi.head<3>();
  const Eigen::Vector3d phi = xi.tail<3>();
  const Eigen::Matrix3d J = Rot3::leftJacobian(phi);
  Matrix6 out = Matrix6::Zero();
  out.topLeftCorner<3, 3>() = J;
  out.topRightCorner<3, 3>() = se3Q(rho, phi);
  out.bottomRightCorner<3, 3>() = J;
  return out;
}

Pose3::Matrix6 Pose3::rightJacobianInverse(const Tangent& xi) {
  // Jr(xi) = Jl(-xi) = [J Q; 0 J]  =>  inverse = [J^-1, -J^-1 Q J^-1; 0, J^-1]
  const Eigen::Vector3d rho = -xi.head<3>();
  const Eigen::Vector3d phi = -xi.tail<3>();
  const Eigen::Matrix3d Jinv = Rot3::leftJacobianInverse(phi);
  const Eigen::Matrix3d Q = se3Q(rho, phi);
  Matrix6 out = Matrix6::Zero();
  out.topLeftCorner<3, 3>() = Jinv;
  out.topRightCorner<3, 3>() = -Jinv * Q * Jinv;
  out.bottomRightCorner<3, 3>() = Jinv;
  return out;
}

// ---------------------------------------------------------------- printing

std::ostream& operator<<(std::ostream& os, const Rot2& r) {
  return os << "Rot2(" << r.theta() << ")";
}

std::ostream& operator<<(std::ostream& os, const Pose2& p) {
  return os << "Pose2(" << p.x() << ", " << p.y() << ", " << p.theta() << ")";
}

std::ostream& operator<<(std::ostream& os, const Rot3& r) {
  const auto& q = r.quaternion();
  return os << "Rot3(w=" << q.w() << ", x=" << q.x() << ", y=" << q.y() << ", z=" << q.z() << ")";
}

std::ostream& operator<<(std::ostream& os, const Pose3& p) {
  const auto& t = p.translation();
  return os << "Pose3(t=[" << t.x() << ", " << t.y() << ", " << t.z() << "], " << p.rotation()
            << ")";
}

}  // namespace fgraph
