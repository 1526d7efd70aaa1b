#pragma once

#include <string>
#include <vector>

#include "hrc/kinematics.hpp"

namespace hrc {

enum class BodySource { kHuman, kRobot };

struct BodyPointSet {
  std::vector<Vector3d> points;  // world frame
  BodySource source = BodySource::kHuman;
};

// A body-surface point rigidly attached to a named link. The reserved link
// name "base" refers to the chain base frame.
struct TemplatePoint {
  std::string link;
  Vector3d offset = Vector3d::Zero();
};

using PointTemplate = std::vector<TemplatePoint>;

inline constexpr const char* kBaseLink = "base";

// Places every template point on its link at configuration `q`, with the
// chain base at `base`. Throws std::invalid_argument for an unknown link.
BodyPointSet body_points(const ChainModel& model, const ChainConfig& q, const Pose& base,
                         const PointTemplate& tmpl, BodySource source = BodySource::kHuman);

// Nearest robot-point distance for each human point (brute force).
std::vector<double> nearest_distances(const BodyPointSet& human, const BodyPointSet& robot);

double min_distance_comfort(const BodyPointSet& human, const BodyPointSet& robot);
double mean_min_comfort(const BodyPointSet& human, const BodyPointSet& robot);

// w(p) = 1 - d(p) / sum(d). Throws std::domain_error when every distance is zero.
std::vector<double> point_weights(const std::vector<double>& distances);
std::vector<double> point_weights(const BodyPointSet& human, const BodyPointSet& robot);

// Weighted mean of nearest distances; near points weigh more.
double weighted_comfort(const std::vector<double>& distances);
double weighted_comfort(const BodyPointSet& human, const BodyPointSet& robot);

}  // namespace hrc
