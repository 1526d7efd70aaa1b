#include "hrc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hrc {

Pose Pose::from_quaternion(double w, double x, double y, double z, const Vector3d& t) {
  Eigen::Quaterniond q(w, x, y, z);
  const double n = q.norm();
  if (!(n > 1e-12)) throw std::invalid_argument("zero-norm quaternion");
  q.coeffs() /= n;
  return {q.toRotationMatrix(), t};
}

Pose Pose::from_axis_angle(const Vector3d& rotvec, const Vector3d& t) {
  const double angle = rotvec.norm();
  if (angle < 1e-15) return from_translation(t);
  return {axis_rotation(rotvec / angle, angle), t};
}

Eigen::Quaterniond Pose::quaternion() const {
  Eigen::Quaterniond q(rotation);
  q.normalize();
  if (q.w() < 0) q.coeffs() *= -1.0;
  return q;
}

bool Pose::is_valid(double tol) const {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  const Matrix3d err = rotation.transpose() * rotation - Matrix3d::Identity();
  return err.cwiseAbs().maxCoeff() <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

Pose compose(const Pose& a, const Pose& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

Pose invert(const Pose& p) {
  const Matrix3d rt = p.rotation.transpose();
  return {rt, -(rt * p.translation)};
}

Vector6d Wrench::stacked() const {
  Vector6d v;
  v << force, moment;
  return v;
}

Wrench Wrench::from_stacked(const Vector6d& v) { return {v.head<3>(), v.tail<3>()}; }

Wrench transform_wrench(const Wrench& w, const Pose& from_to) {
  const Vector3d f = from_to.rotation * w.force;
  return {f, from_to.rotation * w.moment + from_to.translation.cross(f)};
}

Wrench shift_wrench(const Wrench& w, const Vector3d& offset) {
  return {w.force, w.moment + offset.cross(w.force)};
}

Matrix3d rot_x(double a) { return axis_rotation(Vector3d::UnitX(), a); }
Matrix3d rot_y(double a) { return axis_rotation(Vector3d::UnitY(), a); }
Matrix3d rot_z(double a) { return axis_rotation(Vector3d::UnitZ(), a); }

Matrix3d axis_rotation(const Vector3d& u, double angle) {
  // Rodrigues; exact zeros for the cardinal angles keep hand-checked cases clean.
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double v = 1.0 - c;
  Matrix3d r;
  r << c + u.x() * u.x() * v, u.x() * u.y() * v - u.z() * s, u.x() * u.z() * v + u.y() * s,
      u.y() * u.x() * v + u.z() * s, c + u.y() * u.y() * v, u.y() * u.z() * v - u.x() * s,
      u.z() * u.x() * v - u.y() * s, u.z() * u.y() * v + u.x() * s, c + u.z() * u.z() * v;
  return r;
}

Vector3d rotation_error(const Matrix3d& current, const Matrix3d& target) {
  const Eigen::AngleAxisd aa(target * current.transpose());
  return aa.axis() * aa.angle();
}

double rotation_distance(const Matrix3d& a, const Matrix3d& b) {
  const double c = std::clamp(((a.transpose() * b).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

Matrix3d orthonormalize(const Matrix3d& m) {
  Eigen::JacobiSVD<Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

}  // namespace hrc
