#pragma once

#include <random>
#include <string>
#include <vector>

#include "hrc/kinematics.hpp"

namespace hrc::test {

inline Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector3d v;
  do {
    v = {n(rng), n(rng), n(rng)};
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline Pose random_pose(std::mt19937_64& rng, double spread = 1.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  return Pose(axis_rotation(random_unit(rng), a(rng)), Vector3d(u(rng), u(rng), u(rng)));
}

// Planar chain in the x-y plane: revolute z joints, links along x.
inline ChainModel planar_chain(const std::vector<double>& lengths, const std::vector<double>& masses = {}) {
  ChainModel m;
  m.name = "planar";
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    Joint j;
    j.name = "j" + std::to_string(i);
    j.link = "l" + std::to_string(i);
    j.axis = Vector3d::UnitZ();
    if (i > 0) j.origin = Pose::from_translation({lengths[i - 1], 0, 0});
    if (i < masses.size()) {
      j.mass = masses[i];
      j.com = {0.5 * lengths[i], 0, 0};
    }
    m.joints.push_back(j);
  }
  m.tip = Pose::from_translation({lengths.back(), 0, 0});
  return m;
}

// Random serial chain with arbitrary axes and offsets.
inline ChainModel random_chain(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> len(0.05, 0.4);
  std::uniform_real_distribution<double> mass(0.0, 3.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ChainModel m;
  m.name = "random";
  for (int i = 0; i < n; ++i) {
    Joint j;
    j.name = "j" + std::to_string(i);
    j.link = "l" + std::to_string(i);
    j.axis = random_unit(rng);
    j.origin = Pose(axis_rotation(random_unit(rng), u(rng) * kPi), len(rng) * random_unit(rng));
    j.mass = mass(rng);
    j.com = 0.1 * Vector3d(u(rng), u(rng), u(rng));
    j.min_angle = -kPi;
    j.max_angle = kPi;
    m.joints.push_back(j);
  }
  m.tip = Pose::from_translation(len(rng) * random_unit(rng));
  return m;
}

inline ChainConfig random_config(std::mt19937_64& rng, const ChainModel& m) {
  ChainConfig q(m.dof());
  for (std::size_t i = 0; i < m.dof(); ++i) {
    std::uniform_real_distribution<double> u(m.joints[i].min_angle, m.joints[i].max_angle);
    q[i] = u(rng);
  }
  return q;
}

// Central finite differences of the FK tip pose: position and rotation vector.
inline Jacobian fd_jacobian(const ChainModel& m, const ChainConfig& q, double h = 1e-6) {
  Jacobian j(6, m.dof());
  for (std::size_t i = 0; i < m.dof(); ++i) {
    ChainConfig qp = q, qm = q;
    qp[i] += h;
    qm[i] -= h;
    const Pose p = forward_kinematics(m, qp).back();
    const Pose n = forward_kinematics(m, qm).back();
    j.block<3, 1>(0, i) = (p.translation - n.translation) / (2 * h);
    j.block<3, 1>(3, i) = rotation_error(n.rotation, p.rotation) / (2 * h);
  }
  return j;
}

inline double max_abs_diff(const Matrix3d& a, const Matrix3d& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace hrc::test
