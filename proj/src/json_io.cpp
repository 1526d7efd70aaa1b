#include "json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hrc/scene.hpp"

namespace hrc::io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error("'" + path.string() + "': " + e.what());
  }
}

void check_schema(const json& j, const std::string& what) {
  const int v = j.value("schema_version", -1);
  if (v != kSchemaVersion)
    throw std::runtime_error(what + ": unsupported schema_version " + std::to_string(v));
}

double canonical(double x) {
  const double r = std::round(x * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;
}

Vector3d vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json to_json(const Vector3d& v) { return json::array({canonical(v.x()), canonical(v.y()), canonical(v.z())}); }

Eigen::VectorXd vecn(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Pose parse_pose(const json& j) {
  const Vector3d t = j.contains("translation_m") ? vec3(j.at("translation_m")) : Vector3d::Zero();
  if (j.contains("quaternion_wxyz")) {
    const auto& q = j.at("quaternion_wxyz");
    if (q.size() != 4) throw std::runtime_error("quaternion_wxyz needs 4 values");
    return Pose::from_quaternion(q[0], q[1], q[2], q[3], t);
  }
  if (j.contains("axis_angle_rad")) return Pose::from_axis_angle(vec3(j.at("axis_angle_rad")), t);
  return Pose::from_translation(t);
}

json pose_json(const Pose& p) {
  const Eigen::Quaterniond q = p.quaternion();
  return {{"translation_m", to_json(p.translation)},
          {"quaternion_wxyz", json::array({canonical(q.w()), canonical(q.x()), canonical(q.y()), canonical(q.z())})}};
}

}  // namespace hrc::io
