#pragma once

// JSON helpers shared by the scene and task loaders.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hrc/geometry.hpp"

namespace hrc::io {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);
void check_schema(const json& j, const std::string& what);
// Rounds to 1e-12 so serialized files are stable under load/serialize cycles.
double canonical(double x);
Vector3d vec3(const json& j);
json to_json(const Vector3d& v);
Eigen::VectorXd vecn(const json& j);
Pose parse_pose(const json& j);
json pose_json(const Pose& p);

}  // namespace hrc::io
