#include "hrc/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hrc {

void Grasp::validate() const {
  if (grippers.empty()) throw std::invalid_argument("grasp has no grippers");
  if (!(friction_coefficient > 0.0)) throw std::invalid_argument("grasp: friction coefficient must be > 0");
  if (!(max_grip_force > 0.0)) throw std::invalid_argument("grasp: max grip force must be > 0");
  if (!(contact_patch_halfwidth > 0.0)) throw std::invalid_argument("grasp: contact patch must be > 0");
  for (const auto& g : grippers)
    if (!g.is_valid()) throw std::invalid_argument("grasp: invalid gripper pose");
}

void RobotModel::validate() const {
  if (arms.empty()) throw std::invalid_argument("robot '" + name + "' has no arms");
  for (const auto& arm : arms) {
    arm.chain.validate();
    if (static_cast<std::size_t>(arm.torque_limits.size()) != arm.chain.dof())
      throw std::invalid_argument("arm '" + arm.name + "': torque limit count differs from joint count");
    if ((arm.torque_limits.array() <= 0.0).any())
      throw std::invalid_argument("arm '" + arm.name + "': torque limits must be > 0");
  }
}

std::vector<Pose> RobotModel::arm_frames(std::size_t i, const ChainConfig& q) const {
  auto frames = forward_kinematics(arms[i].chain, q);
  const Pose base = arm_base(i);
  for (auto& f : frames) f = compose(base, f);
  return frames;
}

namespace {

Eigen::Matrix<double, 6, 6> wrench_adjoint(const Pose& p) {
  Eigen::Matrix3d skew;
  const Vector3d& t = p.translation;
  skew << 0, -t.z(), t.y(), t.z(), 0, -t.x(), -t.y(), t.x(), 0;
  Eigen::Matrix<double, 6, 6> ad = Eigen::Matrix<double, 6, 6>::Zero();
  ad.topLeftCorner<3, 3>() = p.rotation;
  ad.bottomLeftCorner<3, 3>() = skew * p.rotation;
  ad.bottomRightCorner<3, 3>() = p.rotation;
  return ad;
}

}  // namespace

std::vector<Wrench> distribute_wrench(const Wrench& op_wrench_object, const Grasp& grasp,
                                      double moment_length) {
  const std::size_t k = grasp.grippers.size();
  if (k == 0) throw std::invalid_argument("distribute_wrench: no grippers");
  if (!(moment_length > 0.0)) throw std::invalid_argument("distribute_wrench: moment length must be > 0");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if ((grasp.grippers[i].translation - grasp.grippers[j].translation).norm() < 1e-3)
        throw std::domain_error("distribute_wrench: coincident grippers");

  Eigen::MatrixXd a(6, 6 * k);
  for (std::size_t i = 0; i < k; ++i) {
    Eigen::Matrix<double, 6, 6> ad = wrench_adjoint(grasp.grippers[i]);
    ad.rightCols<3>() *= moment_length;
    a.middleCols(6 * i, 6) = ad;
  }
  const Vector6d b = -op_wrench_object.stacked();
  const Eigen::Matrix<double, 6, 6> aat = a * a.transpose();
  const Eigen::VectorXd v = a.transpose() * aat.ldlt().solve(b);

  std::vector<Wrench> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    out.emplace_back(v.segment<3>(6 * i), moment_length * v.segment<3>(6 * i + 3));
  return out;
}

Wrench grasp_net_wrench(const std::vector<Wrench>& gripper_wrenches, const Grasp& grasp) {
  if (gripper_wrenches.size() != grasp.grippers.size())
    throw std::invalid_argument("grasp_net_wrench: wrench count differs from gripper count");
  Wrench net;
  for (std::size_t i = 0; i < gripper_wrenches.size(); ++i)
    net = net + transform_wrench(gripper_wrenches[i], grasp.grippers[i]);
  return net;
}

TorqueCheck check_robot_torques(const RobotModel& robot, const RobotConfig& q_r,
                                const std::vector<Wrench>& gripper_wrenches) {
  if (q_r.size() != gripper_wrenches.size() || q_r.size() > robot.arms.size())
    throw std::invalid_argument("check_robot_torques: arm/config/wrench count mismatch");
  TorqueCheck check;
  for (std::size_t i = 0; i < q_r.size(); ++i) {
    const ChainModel& chain = robot.arms[i].chain;
    const auto frames = forward_kinematics(chain, q_r[i]);
    const Pose& ee = frames.back();
    // Gripper frame is the end-effector frame; express its wrench in chain axes.
    const Wrench w{ee.rotation * gripper_wrenches[i].force, ee.rotation * gripper_wrenches[i].moment};
    const Jacobian jac = point_jacobian(chain, frames, static_cast<int>(chain.dof()) - 1, ee.translation);
    Eigen::VectorXd tau = jac.transpose() * w.stacked();
    Eigen::VectorXd margin = robot.arms[i].torque_limits - tau.cwiseAbs();
    if ((margin.array() < 0.0).any()) check.pass = false;
    check.torques.push_back(std::move(tau));
    check.margins.push_back(std::move(margin));
  }
  return check;
}

GripCheck check_grip_friction(const Wrench& w, const Grasp& grasp) {
  const double mu = grasp.friction_coefficient;
  const double hw = grasp.contact_patch_halfwidth;
  const double tangential = std::hypot(w.force.x(), w.force.z());
  const double torsion = std::abs(w.moment.y());
  const double in_plane = std::hypot(w.moment.x(), w.moment.z());
  GripCheck g;
  g.required_normal_force = std::max({tangential / mu, torsion / (mu * hw), in_plane / hw});
  g.pass = g.required_normal_force <= grasp.max_grip_force;
  return g;
}

const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::kStable: return "stable";
    case StabilityVerdict::kKinematicInconsistency: return "kinematic_inconsistency";
    case StabilityVerdict::kSingularGrasp: return "singular_grasp";
    case StabilityVerdict::kTorqueLimit: return "torque_limit";
    case StabilityVerdict::kGripFriction: return "grip_friction";
  }
  return "unknown";
}

StabilityResult is_stable(const RobotModel& robot, const RobotConfig& q_r, const Grasp& grasp,
                          const Operation& op, const Pose& object_pose, const ObjectLoad& load,
                          const StabilityOptions& options) {
  StabilityResult res;
  if (q_r.size() != grasp.grippers.size() || q_r.size() > robot.arms.size()) {
    res.verdict = StabilityVerdict::kKinematicInconsistency;
    res.reason = "arm count differs from gripper count";
    return res;
  }
  for (std::size_t i = 0; i < q_r.size(); ++i) {
    const Pose ee = robot.arm_frames(i, q_r[i]).back();
    const Pose want = compose(object_pose, grasp.grippers[i]);
    const double dp = (ee.translation - want.translation).norm();
    const double dr = rotation_distance(ee.rotation, want.rotation);
    if (dp > options.position_tolerance || dr > options.orientation_tolerance) {
      res.verdict = StabilityVerdict::kKinematicInconsistency;
      res.reason = "gripper " + std::to_string(i) + " off its grasp pose by " + std::to_string(dp) +
                   " m / " + std::to_string(dr) + " rad";
      return res;
    }
  }

  Wrench external = op.about_object_origin();
  if (load.mass > 0.0) {
    const Vector3d weight = object_pose.rotation.transpose() * (load.mass * load.gravity);
    external = external + Wrench{weight, load.com.cross(weight)};
  }

  try {
    res.gripper_wrenches = distribute_wrench(external, grasp, options.moment_length);
  } catch (const std::domain_error& e) {
    res.verdict = StabilityVerdict::kSingularGrasp;
    res.reason = e.what();
    return res;
  }

  res.torques = check_robot_torques(robot, q_r, res.gripper_wrenches);
  for (const auto& w : res.gripper_wrenches) res.grips.push_back(check_grip_friction(w, grasp));

  if (!res.torques.pass) {
    res.verdict = StabilityVerdict::kTorqueLimit;
    res.reason = "robot joint torque above its limit";
    return res;
  }
  for (std::size_t i = 0; i < res.grips.size(); ++i) {
    if (!res.grips[i].pass) {
      res.verdict = StabilityVerdict::kGripFriction;
      res.reason = "gripper " + std::to_string(i) + " needs " +
                   std::to_string(res.grips[i].required_normal_force) + " N grip";
      return res;
    }
  }
  return res;
}

}  // namespace hrc
