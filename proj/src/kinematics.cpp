#include "hrc/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hrc {

double ChainModel::reach() const {
  double r = tip.translation.norm();
  for (std::size_t i = 1; i < joints.size(); ++i) r += joints[i].origin.translation.norm();
  return r;
}

void ChainModel::validate() const {
  if (joints.empty()) throw std::invalid_argument("chain '" + name + "' has no joints");
  for (const auto& j : joints) {
    if (!(j.min_angle < j.max_angle))
      throw std::invalid_argument("joint '" + j.name + "': min limit must be below max limit");
    if (!(j.mass >= 0.0)) throw std::invalid_argument("joint '" + j.name + "': negative mass");
    if (std::abs(j.axis.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("joint '" + j.name + "': axis is not unit length");
    if (!j.origin.is_valid()) throw std::invalid_argument("joint '" + j.name + "': invalid origin");
  }
  if (!tip.is_valid()) throw std::invalid_argument("chain '" + name + "': invalid tip pose");
  if (swivel_joint >= static_cast<int>(joints.size()))
    throw std::invalid_argument("chain '" + name + "': swivel joint out of range");
  if (nominal.size() != 0 && static_cast<std::size_t>(nominal.size()) != joints.size())
    throw std::invalid_argument("chain '" + name + "': nominal posture has wrong length");
}

int ChainModel::link_index(const std::string& link) const {
  for (std::size_t i = 0; i < joints.size(); ++i)
    if (joints[i].link == link) return static_cast<int>(i);
  return -1;
}

Eigen::VectorXd ChainModel::nominal_config() const {
  if (nominal.size() == static_cast<Eigen::Index>(joints.size())) return nominal;
  Eigen::VectorXd q(joints.size());
  for (std::size_t i = 0; i < joints.size(); ++i)
    q[i] = 0.5 * (joints[i].min_angle + joints[i].max_angle);
  return q;
}

bool ChainModel::within_limits(const ChainConfig& q, double tol) const {
  if (static_cast<std::size_t>(q.size()) != joints.size()) return false;
  for (std::size_t i = 0; i < joints.size(); ++i)
    if (q[i] < joints[i].min_angle - tol || q[i] > joints[i].max_angle + tol) return false;
  return true;
}

ChainConfig ChainModel::clamp(const ChainConfig& q) const {
  ChainConfig out = q;
  for (std::size_t i = 0; i < joints.size(); ++i)
    out[i] = std::clamp(q[i], joints[i].min_angle, joints[i].max_angle);
  return out;
}

std::vector<Pose> forward_kinematics(const ChainModel& model, const ChainConfig& q) {
  const std::size_t n = model.dof();
  if (static_cast<std::size_t>(q.size()) != n)
    throw std::invalid_argument("forward_kinematics: expected " + std::to_string(n) +
                                " joint values, got " + std::to_string(q.size()));
  std::vector<Pose> frames;
  frames.reserve(n + 1);
  Pose current;
  for (std::size_t i = 0; i < n; ++i) {
    const Joint& j = model.joints[i];
    current = compose(compose(current, j.origin), Pose::from_rotation(axis_rotation(j.axis, q[i])));
    frames.push_back(current);
  }
  frames.push_back(compose(current, model.tip));
  return frames;
}

Jacobian point_jacobian(const ChainModel& model, const std::vector<Pose>& frames, int link,
                        const Vector3d& point) {
  const int n = static_cast<int>(model.dof());
  Jacobian jac = Jacobian::Zero(6, n);
  for (int i = 0; i <= std::min(link, n - 1); ++i) {
    const Vector3d z = frames[i].rotation * model.joints[i].axis;
    jac.block<3, 1>(0, i) = z.cross(point - frames[i].translation);
    jac.block<3, 1>(3, i) = z;
  }
  return jac;
}

Jacobian geometric_jacobian(const ChainModel& model, const ChainConfig& q) {
  const auto frames = forward_kinematics(model, q);
  return point_jacobian(model, frames, static_cast<int>(model.dof()) - 1, frames.back().translation);
}

const char* to_string(IkStatus s) {
  switch (s) {
    case IkStatus::kConverged: return "converged";
    case IkStatus::kUnreachable: return "unreachable";
    case IkStatus::kNoConvergence: return "no_convergence";
    case IkStatus::kJointLimit: return "joint_limit";
  }
  return "unknown";
}

namespace {

struct PoseError {
  Vector6d e;
  double position;
  double orientation;
};

PoseError pose_error(const Pose& current, const Pose& target) {
  PoseError err;
  err.e.head<3>() = target.translation - current.translation;
  err.e.tail<3>() = rotation_error(current.rotation, target.rotation);
  err.position = err.e.head<3>().norm();
  err.orientation = err.e.tail<3>().norm();
  return err;
}

}  // namespace

IkResult solve_ik(const ChainModel& model, const Pose& target, const ChainConfig& seed,
                  const IkOptions& options) {
  const std::size_t n = model.dof();
  if (static_cast<std::size_t>(seed.size()) != n)
    throw std::invalid_argument("solve_ik: seed has wrong dimension");

  IkResult result;
  result.q = model.clamp(seed);

  const Vector3d base_joint = model.joints.front().origin.translation;
  if ((target.translation - base_joint).norm() > model.reach() + 1e-9) {
    result.status = IkStatus::kUnreachable;
    return result;
  }

  auto frames = forward_kinematics(model, result.q);
  PoseError err = pose_error(frames.back(), target);
  double cost = err.e.squaredNorm();
  double lambda = options.damping;
  const double pos_goal = 0.1 * options.position_tolerance;
  const double rot_goal = 0.1 * options.orientation_tolerance;

  // Stagnation exit: a target outside the dexterous workspace plateaus early.
  constexpr int kCheckEvery = 25;
  double checkpoint_cost = cost;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (err.position <= pos_goal && err.orientation <= rot_goal) break;
    if (it > 0 && it % kCheckEvery == 0) {
      if (cost > 0.9 * checkpoint_cost) break;
      checkpoint_cost = cost;
    }

    const Jacobian jac = point_jacobian(model, frames, static_cast<int>(n) - 1, frames.back().translation);
    Eigen::Matrix<double, 6, 6> a = jac * jac.transpose();
    a.diagonal().array() += lambda * lambda;
    ChainConfig dq = jac.transpose() * a.ldlt().solve(err.e);
    const double step = dq.cwiseAbs().maxCoeff();
    if (step > options.max_step) dq *= options.max_step / step;

    const ChainConfig trial = model.clamp(result.q + dq);
    auto trial_frames = forward_kinematics(model, trial);
    const PoseError trial_err = pose_error(trial_frames.back(), target);
    const double trial_cost = trial_err.e.squaredNorm();
    if (trial_cost < cost) {
      result.q = trial;
      frames = std::move(trial_frames);
      err = trial_err;
      cost = trial_cost;
      lambda = std::max(options.damping, lambda * 0.3);
    } else {
      // Rejected step: stiffen the damping and retry from the same point.
      lambda = std::min(1.0, lambda * 10.0);
      if (lambda >= 1.0 && trial_cost >= cost) {
        ++it;
        break;
      }
    }
  }

  result.iterations = it;
  result.position_error = err.position;
  result.orientation_error = err.orientation;
  if (err.position <= options.position_tolerance && err.orientation <= options.orientation_tolerance) {
    result.status = IkStatus::kConverged;
    return result;
  }
  result.status = IkStatus::kNoConvergence;
  for (std::size_t i = 0; i < n; ++i) {
    const Joint& j = model.joints[i];
    if (result.q[i] <= j.min_angle + 1e-9 || result.q[i] >= j.max_angle - 1e-9) {
      result.status = IkStatus::kJointLimit;
      break;
    }
  }
  return result;
}

std::vector<ChainConfig> enumerate_ik_set(const ChainModel& model, const Pose& target,
                                          int n_samples, std::uint64_t seed,
                                          const IkOptions& options, double min_separation) {
  if (n_samples < 1) throw std::invalid_argument("enumerate_ik_set: n_samples must be >= 1");
  std::vector<ChainConfig> solutions;
  const Vector3d base_joint = model.joints.front().origin.translation;
  if ((target.translation - base_joint).norm() > model.reach() + 1e-9) return solutions;

  const std::size_t n = model.dof();
  const ChainConfig nominal = model.nominal_config();
  std::vector<ChainConfig> seeds;
  const int swivel = model.swivel_joint >= 0 ? model.swivel_joint : 0;
  const Joint& sj = model.joints[swivel];
  for (int k = 0; k < n_samples; ++k) {
    ChainConfig s = nominal;
    s[swivel] = sj.min_angle + (k + 0.5) / n_samples * (sj.max_angle - sj.min_angle);
    seeds.push_back(s);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int restarts = std::max(1, n_samples / 2);
  for (int k = 0; k < restarts; ++k) {
    ChainConfig s(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Joint& j = model.joints[i];
      s[i] = j.min_angle + unit(rng) * (j.max_angle - j.min_angle);
    }
    seeds.push_back(s);
  }

  for (const auto& s : seeds) {
    if (static_cast<int>(solutions.size()) >= n_samples) break;
    const IkResult r = solve_ik(model, target, s, options);
    if (!r.ok()) continue;
    const bool duplicate = std::any_of(solutions.begin(), solutions.end(), [&](const ChainConfig& other) {
      return (other - r.q).norm() <= min_separation;
    });
    if (!duplicate) solutions.push_back(r.q);
  }
  return solutions;
}

}  // namespace hrc
