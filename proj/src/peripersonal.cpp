#include "hrc/peripersonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hrc {

BodyPointSet body_points(const ChainModel& model, const ChainConfig& q, const Pose& base,
                         const PointTemplate& tmpl, BodySource source) {
  BodyPointSet out;
  out.source = source;
  out.points.reserve(tmpl.size());
  const auto frames = forward_kinematics(model, q);
  for (const auto& tp : tmpl) {
    if (tp.link == kBaseLink) {
      out.points.push_back(base.apply(tp.offset));
      continue;
    }
    const int idx = model.link_index(tp.link);
    if (idx < 0) throw std::invalid_argument("point template references unknown link '" + tp.link + "'");
    out.points.push_back(base.apply(frames[idx].apply(tp.offset)));
  }
  return out;
}

namespace {

void require_non_empty(const BodyPointSet& human, const BodyPointSet& robot) {
  if (human.points.empty() || robot.points.empty())
    throw std::invalid_argument("peripersonal metric: empty point set");
}

}  // namespace

std::vector<double> nearest_distances(const BodyPointSet& human, const BodyPointSet& robot) {
  require_non_empty(human, robot);
  std::vector<double> d;
  d.reserve(human.points.size());
  for (const auto& ph : human.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pr : robot.points) best = std::min(best, (ph - pr).squaredNorm());
    d.push_back(std::sqrt(best));
  }
  return d;
}

double min_distance_comfort(const BodyPointSet& human, const BodyPointSet& robot) {
  const auto d = nearest_distances(human, robot);
  return *std::min_element(d.begin(), d.end());
}

double mean_min_comfort(const BodyPointSet& human, const BodyPointSet& robot) {
  const auto d = nearest_distances(human, robot);
  return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

std::vector<double> point_weights(const std::vector<double>& distances) {
  if (distances.empty()) throw std::invalid_argument("point_weights: no distances");
  const double total = std::accumulate(distances.begin(), distances.end(), 0.0);
  if (!(total > 0.0)) throw std::domain_error("point_weights: human and robot point sets coincide");
  std::vector<double> w;
  w.reserve(distances.size());
  for (double d : distances) w.push_back(1.0 - d / total);
  return w;
}

std::vector<double> point_weights(const BodyPointSet& human, const BodyPointSet& robot) {
  return point_weights(nearest_distances(human, robot));
}

double weighted_comfort(const std::vector<double>& distances) {
  const auto w = point_weights(distances);
  double sum = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) sum += w[i] * distances[i];
  return sum / static_cast<double>(distances.size());
}

double weighted_comfort(const BodyPointSet& human, const BodyPointSet& robot) {
  return weighted_comfort(nearest_distances(human, robot));
}

}  // namespace hrc
