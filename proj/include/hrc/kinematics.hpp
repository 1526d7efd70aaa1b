#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrc/geometry.hpp"

namespace hrc {

using ChainConfig = Eigen::VectorXd;
using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

// One revolute joint and the rigid link that follows it. The joint frame is
// `origin` relative to the previous link frame; the joint rotates its link
// about `axis` (unit, joint frame).
struct Joint {
  std::string name;
  std::string link;
  Pose origin;
  Vector3d axis = Vector3d::UnitZ();
  double min_angle = -kPi;
  double max_angle = kPi;
  double mass = 0.0;
  Vector3d com = Vector3d::Zero();  // link frame
};

struct ChainModel {
  std::string name;
  std::vector<Joint> joints;
  Pose tip;                // end-effector frame relative to the last link
  int swivel_joint = -1;   // joint seeded uniformly during redundancy enumeration
  Eigen::VectorXd nominal; // preferred posture; empty means mid-range

  std::size_t dof() const { return joints.size(); }
  // Upper bound on the distance from the first joint to the end-effector.
  double reach() const;
  // Throws std::invalid_argument on broken invariants (limits, masses, axes).
  void validate() const;
  // Index of the joint owning `link`, or -1.
  int link_index(const std::string& link) const;
  Eigen::VectorXd nominal_config() const;
  bool within_limits(const ChainConfig& q, double tol = 1e-12) const;
  ChainConfig clamp(const ChainConfig& q) const;
};

// Link poses base-to-tip in the chain base frame: one per joint, then the
// end-effector. Throws std::invalid_argument on a dimension mismatch.
std::vector<Pose> forward_kinematics(const ChainModel& model, const ChainConfig& q);

// 6xn geometric Jacobian at the end-effector origin; rows are (linear; angular)
// in the chain base frame.
Jacobian geometric_jacobian(const ChainModel& model, const ChainConfig& q);

// Jacobian of a point rigidly attached to link `link` (0-based joint index),
// given precomputed link frames. Columns of joints past `link` are zero.
Jacobian point_jacobian(const ChainModel& model, const std::vector<Pose>& frames, int link,
                        const Vector3d& point);

enum class IkStatus { kConverged, kUnreachable, kNoConvergence, kJointLimit };

const char* to_string(IkStatus s);

struct IkOptions {
  int max_iterations = 200;
  double damping = 1e-3;
  double position_tolerance = 1e-4;      // meters
  double orientation_tolerance = 1e-3;   // radians
  double max_step = 0.25;                // radians, per iteration, infinity norm
};

struct IkResult {
  IkStatus status = IkStatus::kNoConvergence;
  ChainConfig q;
  int iterations = 0;
  double position_error = 0.0;
  double orientation_error = 0.0;

  bool ok() const { return status == IkStatus::kConverged; }
};

// Damped-least-squares IK on the 6D pose error with joint-limit clamping.
// `target` is expressed in the chain base frame.
IkResult solve_ik(const ChainModel& model, const Pose& target, const ChainConfig& seed,
                  const IkOptions& options = {});

// Collects distinct IK solutions for `target`: the swivel joint is seeded
// uniformly across its range, followed by random restarts. Solutions are
// pairwise more than `min_separation` apart in joint space, at most
// `n_samples` are returned, and the result is a pure function of the inputs.
std::vector<ChainConfig> enumerate_ik_set(const ChainModel& model, const Pose& target,
                                          int n_samples, std::uint64_t seed = 0,
                                          const IkOptions& options = {},
                                          double min_separation = 1e-2);

}  // namespace hrc
