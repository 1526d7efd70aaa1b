#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hrc/human.hpp"
#include "hrc/kinematics.hpp"
#include "hrc/peripersonal.hpp"
#include "hrc/stability.hpp"

namespace hrc {

inline constexpr int kSchemaVersion = 1;

// Board-like object held by the robot. Object frame at the board center,
// board plane = object x-y, top face at z = thickness / 2.
struct BoardObject {
  double length_x = 0.6;   // m
  double width_y = 0.4;    // m
  double thickness = 0.02; // m
  double mass = 0.5;       // kg
};

// Tool rigidly held in the human hand.
struct ToolModel {
  double mass = 0.8;                          // kg
  Vector3d com_hand{0.0, 0.0, -0.06};         // hand frame, m
  Pose hand_to_tool;                          // tooltip frame in the hand frame
};

struct GraspParams {
  double friction_coefficient = 0.6;
  double max_grip_force = 60.0;            // N
  double contact_patch_halfwidth = 0.02;   // m
  double edge_inset = 0.02;                // m, gripper origin inside the board edge
  double moment_length = 0.02;             // m, moment weighting of wrench distribution
};

// Ring of candidate human shoulder poses around the operation point.
struct HumanSampling {
  double radius_min = 0.4;
  double radius_max = 0.9;
  int radius_steps = 6;
  int headings = 12;
  double shoulder_height = 1.4;   // m, world z of the shoulder frame
  int ik_samples = 6;
  double clearance = 0.05;        // m, minimum human-robot point distance
  double robot_keepout = 0.45;    // m, min horizontal shoulder distance from the robot base axis
};

struct ObjectSearch {
  Vector3d workspace_min{0.55, -0.30, 0.80};
  Vector3d workspace_max{0.95, 0.30, 1.20};
  double position_step = 0.05;  // m
  double yaw_step_deg = 15.0;
};

enum class Aggregation { kMax, kAverage };

struct PlannerDefaults {
  int budget = 400;
  int starts = 24;
  int refine_top_k = 3;
  double muscular_scale = 10.0;
  double peripersonal_scale = 0.5;  // m
  Aggregation aggregation = Aggregation::kMax;
};

struct Scene {
  int schema_version = kSchemaVersion;

  // File references, relative to the scene file's directory.
  std::string robot_file;
  std::string human_arm_file;
  std::string torque_limits_file;
  std::string human_points_file;
  std::string robot_points_file;

  RobotModel robot;
  std::vector<RobotConfig> robot_seeds;  // IK seeds, tried in order
  ChainModel human_arm;
  TorqueLimitTable torque_limits;
  PointTemplate human_points;
  PointTemplate robot_points;  // links "base" or "<arm>/<link>"

  Vector3d gravity{0.0, 0.0, -9.81};
  BoardObject board;
  ToolModel tool;
  GraspParams grasp;
  HumanSampling sampling;
  ObjectSearch search;
  PlannerDefaults planner;

  GravityModel human_gravity() const;
  ObjectLoad object_load() const;
  // Throws std::invalid_argument listing the first broken invariant.
  void validate() const;
};

// --- file I/O ---------------------------------------------------------------

ChainModel load_chain_model(const std::filesystem::path& path);
RobotModel load_robot_model(const std::filesystem::path& path, std::vector<RobotConfig>* seeds = nullptr);
TorqueLimitTable load_torque_limits(const std::filesystem::path& path);
PointTemplate load_point_template(const std::filesystem::path& path);

// Loads a scene and every file it references.
Scene load_scene(const std::filesystem::path& path);
// Canonical text of the scene file itself (referenced files are not inlined).
std::string serialize_scene(const Scene& scene);
Scene parse_scene(const std::string& text, const std::filesystem::path& base_dir);

// Collects validation problems for a scene file without throwing.
std::vector<std::string> check_scene(const std::filesystem::path& path);

}  // namespace hrc
