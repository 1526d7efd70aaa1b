#include <doctest.h>

#include <random>

#include "hrc/geometry.hpp"
#include "test_util.hpp"

using namespace hrc;
using hrc::test::max_abs_diff;

namespace {

// Hand-written homogeneous matrix, used as an independent reference for compose.
Eigen::Matrix4d homogeneous(const Pose& p) {
  Eigen::Matrix4d h = Eigen::Matrix4d::Identity();
  h.topLeftCorner<3, 3>() = p.rotation;
  h.topRightCorner<3, 1>() = p.translation;
  return h;
}

}  // namespace

TEST_CASE("compose examples") {
  const Pose p(rot_z(deg2rad(37)), {0.3, -1.2, 2.0});
  const Pose id = compose(Pose::identity(), p);
  CHECK(max_abs_diff(id.rotation, p.rotation) < 1e-12);
  CHECK((id.translation - p.translation).norm() < 1e-12);

  const Pose e = compose(p, invert(p));
  CHECK(max_abs_diff(e.rotation, Matrix3d::Identity()) < 1e-9);
  CHECK(e.translation.norm() < 1e-9);

  const Pose a(rot_z(deg2rad(90)), {1, 0, 0});
  const Pose c = compose(a, a);
  CHECK(max_abs_diff(c.rotation, rot_z(kPi)) < 1e-12);
  CHECK((c.translation - Vector3d(1, 1, 0)).norm() < 1e-12);
}

TEST_CASE("invert examples") {
  const Pose i = invert(Pose::identity());
  CHECK(max_abs_diff(i.rotation, Matrix3d::Identity()) < 1e-12);
  CHECK(i.translation.norm() < 1e-12);

  CHECK((invert(Pose::from_translation({1, 2, 3})).translation - Vector3d(-1, -2, -3)).norm() < 1e-12);

  const Pose r = invert(Pose(rot_z(deg2rad(90)), {1, 0, 0}));
  CHECK(max_abs_diff(r.rotation, rot_z(deg2rad(-90))) < 1e-12);
  CHECK((r.translation - Vector3d(0, 1, 0)).norm() < 1e-12);
}

TEST_CASE("transform_wrench examples") {
  const Wrench w({1, -2, 3}, {0.5, 0.1, -0.4});
  const Wrench same = transform_wrench(w, Pose::identity());
  CHECK((same.force - w.force).norm() < 1e-12);
  CHECK((same.moment - w.moment).norm() < 1e-12);

  const Wrench lever = transform_wrench(Wrench({0, 0, -10}, Vector3d::Zero()), Pose::from_translation({1, 0, 0}));
  CHECK((lever.force - Vector3d(0, 0, -10)).norm() < 1e-12);
  CHECK((lever.moment - Vector3d(0, 10, 0)).norm() < 1e-12);
}

TEST_CASE("pose and wrench properties on random samples") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const Pose a = test::random_pose(rng, 2.0);
    const Pose b = test::random_pose(rng, 2.0);
    const Pose c = test::random_pose(rng, 2.0);
    CHECK(std::abs(a.rotation.determinant() - 1.0) < 1e-9);
    CHECK(a.is_valid());

    const Pose e = compose(a, invert(a));
    CHECK(max_abs_diff(e.rotation, Matrix3d::Identity()) < 1e-9);
    CHECK(e.translation.cwiseAbs().maxCoeff() < 1e-9);

    const Pose l = compose(compose(a, b), c);
    const Pose r = compose(a, compose(b, c));
    CHECK(max_abs_diff(l.rotation, r.rotation) < 1e-9);
    CHECK((l.translation - r.translation).cwiseAbs().maxCoeff() < 1e-9);

    const Eigen::Matrix4d ref = homogeneous(a) * homogeneous(b);
    CHECK((homogeneous(compose(a, b)) - ref).cwiseAbs().maxCoeff() < 1e-12);

    const Wrench w(5.0 * test::random_unit(rng), 2.0 * test::random_unit(rng));
    const Wrench t = transform_wrench(w, a);
    CHECK(std::abs(t.force.norm() - w.force.norm()) < 1e-9);
    CHECK((t.moment - (a.rotation * w.moment + a.translation.cross(a.rotation * w.force))).norm() < 1e-12);
  }
}

TEST_CASE("quaternion and axis-angle round trip") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const Pose a = test::random_pose(rng);
    const Eigen::Quaterniond q = a.quaternion();
    CHECK(q.w() >= 0.0);
    const Pose b = Pose::from_quaternion(2 * q.w(), 2 * q.x(), 2 * q.y(), 2 * q.z(), a.translation);
    CHECK(max_abs_diff(a.rotation, b.rotation) < 1e-12);
    const Eigen::AngleAxisd aa(a.rotation);
    const Pose c = Pose::from_axis_angle(aa.angle() * aa.axis(), a.translation);
    CHECK(max_abs_diff(a.rotation, c.rotation) < 1e-9);
  }
  CHECK_THROWS_AS(Pose::from_quaternion(0, 0, 0, 0, Vector3d::Zero()), std::invalid_argument);
}

TEST_CASE("rotation error is the rotation vector taking current to target") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    const Matrix3d a = test::random_pose(rng).rotation;
    const Vector3d axis = test::random_unit(rng);
    const double angle = 0.1 + 2.5 * (k / 100.0);
    const Matrix3d b = axis_rotation(axis, angle) * a;
    const Vector3d e = rotation_error(a, b);
    CHECK((e - angle * axis).norm() < 1e-9);
    CHECK(std::abs(rotation_distance(a, b) - angle) < 1e-9);
  }
}

TEST_CASE("orthonormalize repairs a perturbed rotation") {
  Matrix3d m = rot_x(0.3) * rot_y(-0.7);
  m(0, 1) += 1e-4;
  const Matrix3d r = orthonormalize(m);
  CHECK((r * r.transpose() - Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(r.determinant() - 1.0) < 1e-12);
}
