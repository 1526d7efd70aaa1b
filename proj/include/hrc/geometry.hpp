#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace hrc {

using Eigen::Matrix3d;
using Eigen::Vector3d;
using Vector6d = Eigen::Matrix<double, 6, 1>;

// Rigid transform. Maps coordinates in the child frame to the parent frame:
// p_parent = rotation * p_child + translation.
struct Pose {
  Matrix3d rotation = Matrix3d::Identity();
  Vector3d translation = Vector3d::Zero();

  Pose() = default;
  Pose(const Matrix3d& r, const Vector3d& t) : rotation(r), translation(t) {}

  static Pose identity() { return {}; }
  static Pose from_translation(const Vector3d& t) { return {Matrix3d::Identity(), t}; }
  static Pose from_rotation(const Matrix3d& r) { return {r, Vector3d::Zero()}; }

  // Builds from a (not necessarily unit) quaternion in w, x, y, z order.
  static Pose from_quaternion(double w, double x, double y, double z, const Vector3d& t);
  // Builds from a rotation vector (axis * angle, radians).
  static Pose from_axis_angle(const Vector3d& rotvec, const Vector3d& t);

  Vector3d apply(const Vector3d& p) const { return rotation * p + translation; }
  Eigen::Quaterniond quaternion() const;

  bool is_valid(double tol = 1e-9) const;
};

Pose compose(const Pose& a, const Pose& b);
Pose invert(const Pose& p);

// Generalized force. The moment is taken about the origin of the frame the
// wrench is expressed in.
struct Wrench {
  Vector3d force = Vector3d::Zero();
  Vector3d moment = Vector3d::Zero();

  Wrench() = default;
  Wrench(const Vector3d& f, const Vector3d& m) : force(f), moment(m) {}

  Vector6d stacked() const;
  static Wrench from_stacked(const Vector6d& v);

  Wrench operator+(const Wrench& o) const { return {force + o.force, moment + o.moment}; }
  Wrench operator-() const { return {-force, -moment}; }
  Wrench operator*(double k) const { return {force * k, moment * k}; }
};

// Re-expresses `w` given in frame A into frame B, where `from_to` is the pose
// of A in B: f' = R f, m' = R m + t x (R f).
Wrench transform_wrench(const Wrench& w, const Pose& from_to);

// Moves the moment reference point of a wrench without changing axes.
// `offset` is the old reference point expressed relative to the new one.
Wrench shift_wrench(const Wrench& w, const Vector3d& offset);

Matrix3d rot_x(double angle);
Matrix3d rot_y(double angle);
Matrix3d rot_z(double angle);
Matrix3d axis_rotation(const Vector3d& unit_axis, double angle);

// Rotation vector r such that exp([r]) * current = target.
Vector3d rotation_error(const Matrix3d& current, const Matrix3d& target);
// Angle of the relative rotation between a and b.
double rotation_distance(const Matrix3d& a, const Matrix3d& b);

// Projects a near-rotation onto SO(3).
Matrix3d orthonormalize(const Matrix3d& m);

constexpr double kPi = 3.14159265358979323846;
constexpr double deg2rad(double d) { return d * kPi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace hrc
