#include "hrc/human.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hrc {

void TorqueLimitTable::validate() const {
  if (joints.empty()) throw std::invalid_argument("torque-limit table has no joints");
  for (std::size_t j = 0; j < joints.size(); ++j) {
    const auto& bps = joints[j];
    if (bps.empty()) throw std::invalid_argument("torque-limit table: joint without breakpoints");
    for (std::size_t k = 0; k < bps.size(); ++k) {
      if (!(bps[k].limit_pos > 0.0) || !(bps[k].limit_neg > 0.0))
        throw std::invalid_argument("torque-limit table: limits must be positive");
      if (k > 0 && !(bps[k].angle > bps[k - 1].angle))
        throw std::invalid_argument("torque-limit table: breakpoints must be strictly ascending");
    }
  }
}

double TorqueLimitTable::limit(std::size_t joint, double angle, double direction_sign) const {
  if (joint >= joints.size()) throw std::out_of_range("torque-limit table: joint index out of range");
  const auto& bps = joints[joint];
  const bool pos = direction_sign >= 0.0;
  auto value = [pos](const TorqueBreakpoint& b) { return pos ? b.limit_pos : b.limit_neg; };
  if (bps.size() == 1) return value(bps.front());
  if (angle < bps.front().angle - 1e-12 || angle > bps.back().angle + 1e-12)
    throw std::out_of_range("torque-limit table: angle " + std::to_string(angle) +
                            " outside breakpoints of joint " + std::to_string(joint));
  auto hi = std::upper_bound(bps.begin(), bps.end(), angle,
                             [](double a, const TorqueBreakpoint& b) { return a < b.angle; });
  if (hi == bps.end()) return value(bps.back());
  if (hi == bps.begin()) return value(bps.front());
  const auto lo = hi - 1;
  const double t = (angle - lo->angle) / (hi->angle - lo->angle);
  return value(*lo) + t * (value(*hi) - value(*lo));
}

void GravityModel::validate() const {
  if (!(tool_mass >= 0.0)) throw std::invalid_argument("gravity model: negative tool mass");
  const double g = gravity.norm();
  if (!allow_any_gravity && (g < 9.0 || g > 10.5))
    throw std::invalid_argument("gravity model: |g| outside [9.0, 10.5] m/s^2");
}

Eigen::VectorXd motion_direction(const Jacobian& jac, const Vector6d& hand_motion) {
  if (hand_motion.squaredNorm() == 0.0)
    throw std::invalid_argument("motion_direction: zero hand motion");
  const Eigen::VectorXd qdot = jac.transpose() * hand_motion;
  Eigen::VectorXd signs(qdot.size());
  for (Eigen::Index i = 0; i < qdot.size(); ++i) signs[i] = qdot[i] < 0.0 ? -1.0 : 1.0;
  return signs;
}

namespace {

std::vector<Pose> world_frames(const ChainModel& model, const ChainConfig& q, const Pose& base) {
  auto frames = forward_kinematics(model, q);
  for (auto& f : frames) f = compose(base, f);
  return frames;
}

Eigen::VectorXd torques_from_frames(const ChainModel& model, const std::vector<Pose>& frames,
                                    const Wrench& f_world, const GravityModel& gravity) {
  const int n = static_cast<int>(model.dof());
  const Pose& ee = frames.back();
  Eigen::VectorXd tau = point_jacobian(model, frames, n - 1, ee.translation).transpose() * f_world.stacked();
  for (int i = 0; i < n; ++i) {
    const Joint& j = model.joints[i];
    if (j.mass == 0.0) continue;
    const Vector3d com = frames[i].apply(j.com);
    tau += point_jacobian(model, frames, i, com).topRows<3>().transpose() * (j.mass * gravity.gravity);
  }
  if (gravity.tool_mass > 0.0) {
    const Vector3d com = ee.apply(gravity.tool_com);
    tau += point_jacobian(model, frames, n - 1, com).topRows<3>().transpose() *
           (gravity.tool_mass * gravity.gravity);
  }
  return tau;
}

}  // namespace

Eigen::VectorXd joint_torques(const ChainModel& model, const ChainConfig& q, const Wrench& f_world,
                              const GravityModel& gravity, const Pose& base) {
  return torques_from_frames(model, world_frames(model, q, base), f_world, gravity);
}

TorqueLimitMatrix torque_limit_matrix(const TorqueLimitTable& table, const ChainConfig& q,
                                      const Eigen::VectorXd& signs) {
  if (q.size() != signs.size() || static_cast<std::size_t>(q.size()) != table.joints.size())
    throw std::invalid_argument("torque_limit_matrix: dimension mismatch");
  Eigen::VectorXd d(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) d[i] = table.limit(static_cast<std::size_t>(i), q[i], signs[i]);
  return TorqueLimitMatrix(d);
}

Eigen::VectorXd activation_levels(const Eigen::VectorXd& tau, const TorqueLimitMatrix& limits) {
  const auto& d = limits.diagonal();
  if (tau.size() != d.size()) throw std::invalid_argument("activation_levels: dimension mismatch");
  if ((d.array() <= 0.0).any()) throw std::invalid_argument("activation_levels: non-positive limit");
  return tau.cwiseAbs().cwiseQuotient(d);
}

double muscular_comfort(const Eigen::VectorXd& alpha) {
  return 1.0 / std::max(alpha.squaredNorm(), kActivationFloor);
}

MuscularEvaluation evaluate_muscular(const ChainModel& arm, const TorqueLimitTable& table,
                                     const GravityModel& gravity, const ChainConfig& q,
                                     const Pose& shoulder, const Wrench& exerted,
                                     const Vector3d& tooltip_world) {
  const auto frames = world_frames(arm, q, shoulder);
  const Vector3d hand = frames.back().translation;
  // The object pushes back on the hand; move that load's moment to the hand.
  const Wrench load = shift_wrench(-exerted, tooltip_world - hand);

  MuscularEvaluation ev;
  ev.torques = torques_from_frames(arm, frames, load, gravity);
  const Jacobian jac = point_jacobian(arm, frames, static_cast<int>(arm.dof()) - 1, hand);
  ev.signs = motion_direction(jac, exerted.stacked());
  const TorqueLimitMatrix pi = torque_limit_matrix(table, q, ev.signs);
  ev.limits = pi.diagonal();
  ev.activation = activation_levels(ev.torques, pi);
  ev.comfort = muscular_comfort(ev.activation);
  return ev;
}

}  // namespace hrc
