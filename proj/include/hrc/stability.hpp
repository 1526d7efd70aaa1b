#pragma once

#include <string>
#include <vector>

#include "hrc/kinematics.hpp"
#include "hrc/operation.hpp"

namespace hrc {

// Gripper poses on the object plus the contact parameters shared by all
// grippers. Gripper frame convention: z is the approach direction and y is
// the jaw closing axis, i.e. the contact normal of the pinched surface.
// For a bimanual grasp gripper 0 is held by the left arm and 1 by the right.
struct Grasp {
  std::vector<Pose> grippers;  // object frame
  double friction_coefficient = 0.5;
  double max_grip_force = 50.0;        // N
  double contact_patch_halfwidth = 0.01;  // m

  void validate() const;
};

struct Arm {
  std::string name;
  ChainModel chain;
  Pose mount;                     // chain base in the robot base frame
  Eigen::VectorXd torque_limits;  // N·m per joint
};

struct RobotModel {
  std::string name;
  std::vector<Arm> arms;
  Pose base_pose;

  void validate() const;
  // World pose of arm `i`'s chain base.
  Pose arm_base(std::size_t i) const { return compose(base_pose, arms[i].mount); }
  // World poses of every link of arm `i` (forward_kinematics composed with the base).
  std::vector<Pose> arm_frames(std::size_t i, const ChainConfig& q) const;
};

using RobotConfig = std::vector<ChainConfig>;

// Weight of the held object.
struct ObjectLoad {
  double mass = 0.0;                      // kg
  Vector3d com = Vector3d::Zero();        // object frame
  Vector3d gravity{0.0, 0.0, -9.81};      // world frame
};

// Gripper wrenches (gripper frames, exerted by each gripper on the object)
// that balance `op_wrench_object` (object frame, moment about the object
// origin). Minimizes sum(|f|^2 + |m|^2 / length^2); length = 1 gives the plain
// Euclidean minimum-norm solution. Throws std::domain_error if two grippers
// coincide.
std::vector<Wrench> distribute_wrench(const Wrench& op_wrench_object, const Grasp& grasp,
                                      double moment_length = 1.0);

// Net object-frame wrench of the gripper wrenches.
Wrench grasp_net_wrench(const std::vector<Wrench>& gripper_wrenches, const Grasp& grasp);

struct TorqueCheck {
  bool pass = true;
  std::vector<Eigen::VectorXd> torques;
  std::vector<Eigen::VectorXd> margins;  // limit - |tau|
};

// Joint torques tau = J^T w each arm needs to exert its gripper wrench.
TorqueCheck check_robot_torques(const RobotModel& robot, const RobotConfig& q_r,
                                const std::vector<Wrench>& gripper_wrenches);

struct GripCheck {
  bool pass = true;
  double required_normal_force = 0.0;
};

// Soft-finger contact with normal along gripper y.
GripCheck check_grip_friction(const Wrench& gripper_wrench, const Grasp& grasp);

enum class StabilityVerdict {
  kStable,
  kKinematicInconsistency,
  kSingularGrasp,
  kTorqueLimit,
  kGripFriction,
};

const char* to_string(StabilityVerdict v);

struct StabilityOptions {
  double position_tolerance = 1e-4;
  double orientation_tolerance = 1e-3;
  double moment_length = 1.0;  // see distribute_wrench
};

struct StabilityResult {
  StabilityVerdict verdict = StabilityVerdict::kStable;
  std::string reason;
  std::vector<Wrench> gripper_wrenches;
  TorqueCheck torques;
  std::vector<GripCheck> grips;

  bool stable() const { return verdict == StabilityVerdict::kStable; }
};

// Static stability of the held object under the operation wrench plus the
// object's weight. Kinematic inconsistency between q_r and (object_pose,
// grasp) is reported separately from instability.
StabilityResult is_stable(const RobotModel& robot, const RobotConfig& q_r, const Grasp& grasp,
                          const Operation& op, const Pose& object_pose, const ObjectLoad& load = {},
                          const StabilityOptions& options = {});

}  // namespace hrc
