#pragma once

#include <string>
#include <vector>

#include "hrc/kinematics.hpp"

namespace hrc {

// Direction-resolved maximum joint torque, piecewise linear in joint angle.
struct TorqueBreakpoint {
  double angle = 0.0;      // radians
  double limit_pos = 0.0;  // N·m, joint moving in the + direction
  double limit_neg = 0.0;  // N·m, joint moving in the - direction
};

struct TorqueLimitTable {
  std::vector<std::string> joint_names;
  // Breakpoints per joint, ascending in angle. A single breakpoint is a
  // constant limit valid at any angle.
  std::vector<std::vector<TorqueBreakpoint>> joints;

  void validate() const;
  // Throws std::out_of_range when `angle` lies outside the joint's breakpoints.
  double limit(std::size_t joint, double angle, double direction_sign) const;
};

struct GravityModel {
  Vector3d gravity{0.0, 0.0, -9.81};  // world frame, m/s^2
  double tool_mass = 0.0;             // kg
  Vector3d tool_com = Vector3d::Zero();  // end-effector frame, meters
  bool allow_any_gravity = false;

  void validate() const;
};

// sign(J^T * motion) per joint, +1 for zero components.
// Throws std::invalid_argument for a zero motion vector.
Eigen::VectorXd motion_direction(const Jacobian& jac, const Vector6d& hand_motion);

// Quasi-static joint torques: tau = J^T f + gravity torques of every link COM
// and the tool. `f_world` acts at the end-effector origin in world axes; the
// chain base sits at `base` in the world.
Eigen::VectorXd joint_torques(const ChainModel& model, const ChainConfig& q, const Wrench& f_world,
                              const GravityModel& gravity, const Pose& base = {});

using TorqueLimitMatrix = Eigen::DiagonalMatrix<double, Eigen::Dynamic>;

TorqueLimitMatrix torque_limit_matrix(const TorqueLimitTable& table, const ChainConfig& q,
                                      const Eigen::VectorXd& signs);

// alpha_i = |tau_i| / Pi_ii.
Eigen::VectorXd activation_levels(const Eigen::VectorXd& tau, const TorqueLimitMatrix& limits);

constexpr double kActivationFloor = 1e-6;

// 1 / max(||alpha||^2, kActivationFloor).
double muscular_comfort(const Eigen::VectorXd& alpha);

struct MuscularEvaluation {
  Eigen::VectorXd torques;
  Eigen::VectorXd signs;
  Eigen::VectorXd limits;
  Eigen::VectorXd activation;
  double comfort = 0.0;
};

// Full muscular pipeline for a human arm exerting `exerted` on the object.
// `exerted` is in world axes with its moment about `tooltip_world`; the hand
// carries the reaction of that wrench plus gravity.
MuscularEvaluation evaluate_muscular(const ChainModel& arm, const TorqueLimitTable& table,
                                     const GravityModel& gravity, const ChainConfig& q,
                                     const Pose& shoulder, const Wrench& exerted,
                                     const Vector3d& tooltip_world);

}  // namespace hrc
