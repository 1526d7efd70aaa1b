#include "hrc/planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace hrc {

void ComfortWeights::validate() const {
  if (!std::isfinite(muscular) || !std::isfinite(peripersonal) || muscular < 0.0 || peripersonal < 0.0)
    throw std::invalid_argument("comfort weights must be finite and non-negative");
  if (muscular + peripersonal <= 0.0) throw std::invalid_argument("comfort weights must not both be zero");
}

double combined_comfort(double muscular, double peripersonal, const ComfortWeights& w,
                        const ComfortScales& s) {
  return w.muscular * muscular / s.muscular + w.peripersonal * peripersonal / s.peripersonal;
}

namespace {

struct RingPose {
  Pose pose;
  std::uint64_t seed;  // from the ring indices, so sub-grids reuse the same IK seeds
};

std::vector<RingPose> ring_poses(const Scene& scene, const Vector3d& tooltip_world) {
  const HumanSampling& hs = scene.sampling;
  const Eigen::Vector2d robot_axis = scene.robot.base_pose.translation.head<2>();
  std::vector<RingPose> out;
  for (int k = 0; k < hs.radius_steps; ++k) {
    const double r = hs.radius_steps == 1
                         ? hs.radius_min
                         : hs.radius_min + k * (hs.radius_max - hs.radius_min) / (hs.radius_steps - 1);
    for (int h = 0; h < hs.headings; ++h) {
      const double phi = 2.0 * kPi * h / hs.headings;
      const Vector3d p(tooltip_world.x() + r * std::cos(phi), tooltip_world.y() + r * std::sin(phi),
                       hs.shoulder_height);
      if ((p.head<2>() - robot_axis).norm() < hs.robot_keepout) continue;
      out.push_back({Pose(rot_z(phi + kPi), p), static_cast<std::uint64_t>(k) * 1000 + h});
    }
  }
  return out;
}

}  // namespace

std::vector<Pose> human_base_poses(const Scene& scene, const Vector3d& tooltip_world) {
  std::vector<Pose> out;
  for (const auto& rp : ring_poses(scene, tooltip_world)) out.push_back(rp.pose);
  return out;
}

namespace {

Wrench exerted_world(const Pose& object_pose, const Operation& op) {
  return {object_pose.rotation * op.wrench_object.force, object_pose.rotation * op.wrench_object.moment};
}

}  // namespace

HumanKinematicSet human_kinematic_set(const Scene& scene, const Pose& object_pose, const Operation& op) {
  const Pose tool_world = compose(object_pose, op.tooltip_pose_object);
  const Pose hand_world = compose(tool_world, invert(scene.tool.hand_to_tool));
  const Wrench exerted = exerted_world(object_pose, op);
  const GravityModel gravity = scene.human_gravity();
  const ChainModel& arm = scene.human_arm;
  const Vector3d shoulder_joint = arm.joints.front().origin.translation;

  HumanKinematicSet out;
  for (const auto& [base, seed] : ring_poses(scene, tool_world.translation)) {
    const Pose target = compose(invert(base), hand_world);
    if ((target.translation - shoulder_joint).norm() > arm.reach()) continue;
    const auto qs = enumerate_ik_set(arm, target, scene.sampling.ik_samples, seed);
    for (const auto& q : qs) {
      HumanCandidate c;
      c.q_h = q;
      c.shoulder = base;
      c.muscular =
          evaluate_muscular(arm, scene.torque_limits, gravity, q, base, exerted, tool_world.translation).comfort;
      c.points = body_points(arm, q, base, scene.human_points, BodySource::kHuman);
      out.push_back(std::move(c));
    }
  }
  return out;
}

BodyPointSet robot_body_points(const Scene& scene, const RobotConfig& q_r) {
  const RobotModel& robot = scene.robot;
  if (q_r.size() != robot.arms.size())
    throw std::invalid_argument("robot_body_points: configuration has wrong arm count");
  std::vector<std::vector<Pose>> frames;
  for (std::size_t i = 0; i < robot.arms.size(); ++i) frames.push_back(robot.arm_frames(i, q_r[i]));

  BodyPointSet set;
  set.source = BodySource::kRobot;
  set.points.reserve(scene.robot_points.size());
  for (const auto& tp : scene.robot_points) {
    if (tp.link == kBaseLink) {
      set.points.push_back(robot.base_pose.apply(tp.offset));
      continue;
    }
    const auto slash = tp.link.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("robot point link '" + tp.link + "' lacks an arm");
    const std::string arm_name = tp.link.substr(0, slash);
    const std::string link = tp.link.substr(slash + 1);
    std::size_t a = 0;
    while (a < robot.arms.size() && robot.arms[a].name != arm_name) ++a;
    if (a == robot.arms.size()) throw std::invalid_argument("robot point: unknown arm '" + arm_name + "'");
    if (link == kBaseLink) {
      set.points.push_back(robot.arm_base(a).apply(tp.offset));
      continue;
    }
    const int li = robot.arms[a].chain.link_index(link);
    if (li < 0) throw std::invalid_argument("robot point: unknown link '" + tp.link + "'");
    set.points.push_back(frames[a][li].apply(tp.offset));
  }
  return set;
}

std::vector<HumanChoice> feasible_human_set(const Scene& scene, const RobotConfig& q_r,
                                            const HumanKinematicSet& kinematic) {
  const BodyPointSet robot_pts = robot_body_points(scene, q_r);
  std::vector<HumanChoice> qh;
  for (const auto& c : kinematic) {
    const auto d = nearest_distances(c.points, robot_pts);
    if (*std::min_element(d.begin(), d.end()) < scene.sampling.clearance) continue;
    qh.push_back({c.q_h, c.shoulder, c.muscular, weighted_comfort(d)});
  }
  return qh;
}

std::vector<HumanChoice> feasible_human_set(const Scene& scene, const RobotConfig& q_r,
                                            const Pose& object_pose, const Operation& op) {
  return feasible_human_set(scene, q_r, human_kinematic_set(scene, object_pose, op));
}

ComfortReport comfort_max(const std::vector<HumanChoice>& qh, const ComfortWeights& w,
                          const ComfortScales& s) {
  if (qh.empty()) throw std::invalid_argument("comfort_max: empty human set");
  std::size_t best = 0;
  double best_c = combined_comfort(qh[0].muscular, qh[0].peripersonal, w, s);
  ComfortReport r;
  r.qh_muscular.reserve(qh.size());
  for (std::size_t i = 0; i < qh.size(); ++i) {
    r.qh_muscular.push_back(qh[i].muscular);
    const double c = combined_comfort(qh[i].muscular, qh[i].peripersonal, w, s);
    if (c > best_c) {
      best_c = c;
      best = i;
    }
  }
  r.muscular = qh[best].muscular;
  r.peripersonal = qh[best].peripersonal;
  r.combined = best_c;
  r.stable = true;
  r.chosen = qh[best];
  return r;
}

ComfortReport comfort_avg(const std::vector<HumanChoice>& qh, const ComfortWeights& w,
                          const ComfortScales& s) {
  if (qh.empty()) throw std::invalid_argument("comfort_avg: empty human set");
  ComfortReport r;
  for (const auto& h : qh) {
    r.qh_muscular.push_back(h.muscular);
    r.muscular += h.muscular;
    r.peripersonal += h.peripersonal;
    r.combined += combined_comfort(h.muscular, h.peripersonal, w, s);
  }
  const double n = static_cast<double>(qh.size());
  r.muscular /= n;
  r.peripersonal /= n;
  r.combined /= n;
  r.stable = true;
  return r;
}

namespace {

// Gripper approaching the edge point `p` along -outward, jaws closing along
// +/- object z (the board faces).
Pose edge_gripper(const Vector3d& p, const Vector3d& outward, double inset, double jaw_sign) {
  const Vector3d z = -outward;
  const Vector3d y = jaw_sign * Vector3d::UnitZ();
  Matrix3d r;
  r.col(0) = y.cross(z);
  r.col(1) = y;
  r.col(2) = z;
  return Pose(r, p - inset * outward);
}

}  // namespace

std::vector<Grasp> generate_edge_grasps(const BoardObject& board, const GraspParams& params) {
  const double a = 0.5 * board.length_x;
  const double b = 0.5 * board.width_y;
  struct Contact {
    Vector3d point;
    Vector3d outward;
  };
  const std::vector<std::pair<Contact, Contact>> layouts = {
      {{{-a, 0, 0}, -Vector3d::UnitX()}, {{a, 0, 0}, Vector3d::UnitX()}},
      {{{0, -b, 0}, -Vector3d::UnitY()}, {{0, b, 0}, Vector3d::UnitY()}},
      {{{-0.5 * a, -b, 0}, -Vector3d::UnitY()}, {{0.5 * a, -b, 0}, -Vector3d::UnitY()}},
  };
  std::vector<Grasp> out;
  for (const auto& [c0, c1] : layouts) {
    for (int swap = 0; swap < 2; ++swap) {
      const Contact& left = swap ? c1 : c0;
      const Contact& right = swap ? c0 : c1;
      for (double jaw : {1.0, -1.0}) {
        Grasp g;
        g.grippers = {edge_gripper(left.point, left.outward, params.edge_inset, jaw),
                      edge_gripper(right.point, right.outward, params.edge_inset, jaw)};
        g.friction_coefficient = params.friction_coefficient;
        g.max_grip_force = params.max_grip_force;
        g.contact_patch_halfwidth = params.contact_patch_halfwidth;
        out.push_back(std::move(g));
      }
    }
  }
  return out;
}

const char* to_string(PlannerVariant v) {
  switch (v) {
    case PlannerVariant::kComfort: return "comfort";
    case PlannerVariant::kMuscular: return "muscular";
    case PlannerVariant::kPeripersonal: return "peripersonal";
    case PlannerVariant::kRandom: return "random";
  }
  return "unknown";
}

PlannerVariant parse_variant(const std::string& s) {
  for (auto v : {PlannerVariant::kComfort, PlannerVariant::kMuscular, PlannerVariant::kPeripersonal,
                 PlannerVariant::kRandom})
    if (s == to_string(v)) return v;
  throw std::invalid_argument("unknown planner variant '" + s + "'");
}

ComfortWeights variant_weights(PlannerVariant v) {
  switch (v) {
    case PlannerVariant::kMuscular: return {1.0, 0.0};
    case PlannerVariant::kPeripersonal: return {0.0, 1.0};
    case PlannerVariant::kComfort:
    case PlannerVariant::kRandom: return {0.5, 0.5};
  }
  return {};
}

PlannerConfig PlannerConfig::from_scene(const Scene& scene, PlannerVariant variant, std::uint64_t seed) {
  PlannerConfig c;
  c.variant = variant;
  c.seed = seed;
  c.budget = scene.planner.budget;
  c.starts = scene.planner.starts;
  c.refine_top_k = scene.planner.refine_top_k;
  c.aggregation = scene.planner.aggregation;
  return c;
}

std::shared_ptr<const PoseEvaluation> CandidateCache::find(const Key& key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : it->second;
}

void CandidateCache::insert(const Key& key, std::shared_ptr<const PoseEvaluation> eval) {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_.emplace(key, std::move(eval));
}

std::size_t CandidateCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

namespace {

using KinematicSource = std::function<const HumanKinematicSet&()>;

GraspOutcome evaluate_grasp_with(const Scene& scene, const Operation& op, const Pose& object_pose,
                                 const Grasp& grasp, const KinematicSource& kinematic) {
  GraspOutcome out;
  const RobotModel& robot = scene.robot;
  RobotConfig q_r(grasp.grippers.size());
  for (std::size_t i = 0; i < grasp.grippers.size(); ++i) {
    const Pose target = compose(invert(robot.arm_base(i)), compose(object_pose, grasp.grippers[i]));
    bool found = false;
    for (const auto& seed : scene.robot_seeds) {
      const IkResult r = solve_ik(robot.arms[i].chain, target, seed[i]);
      if (r.ok()) {
        q_r[i] = r.q;
        found = true;
        break;
      }
      if (r.status == IkStatus::kUnreachable) break;  // independent of the seed
    }
    if (!found) return out;
  }
  out.q_r = q_r;

  StabilityOptions so;
  so.moment_length = scene.grasp.moment_length;
  const StabilityResult st = is_stable(robot, q_r, grasp, op, object_pose, scene.object_load(), so);
  out.verdict = st.verdict;
  if (!st.stable()) {
    out.stage = st.verdict == StabilityVerdict::kKinematicInconsistency ? GraspOutcome::Stage::kIkFailed
                                                                       : GraspOutcome::Stage::kUnstable;
    return out;
  }

  out.qh = feasible_human_set(scene, q_r, kinematic());
  out.stage = out.qh.empty() ? GraspOutcome::Stage::kHumanInfeasible : GraspOutcome::Stage::kFeasible;
  return out;
}

// Lazily computed human kinematic set for one object pose.
struct LazyKinematics {
  const Scene& scene;
  const Operation& op;
  Pose object_pose;
  std::optional<HumanKinematicSet> set;

  const HumanKinematicSet& get() {
    if (!set) set = human_kinematic_set(scene, object_pose, op);
    return *set;
  }
};

struct Grid {
  Vector3d lo;
  double step;
  std::array<int, 4> size;  // x, y, z, yaw

  explicit Grid(const ObjectSearch& s) : lo(s.workspace_min), step(s.position_step) {
    for (int d = 0; d < 3; ++d)
      size[d] = static_cast<int>(std::floor((s.workspace_max[d] - s.workspace_min[d]) / step + 1e-9)) + 1;
    size[3] = std::max(1, static_cast<int>(std::lround(360.0 / s.yaw_step_deg)));
  }
  long cells() const { return static_cast<long>(size[0]) * size[1] * size[2] * size[3]; }
  CandidateCache::Key key(long index) const {
    CandidateCache::Key k{};
    for (int d = 3; d >= 0; --d) {
      k[d] = static_cast<int>(index % size[d]);
      index /= size[d];
    }
    return k;
  }
  Pose pose(const CandidateCache::Key& k) const {
    const Vector3d p(lo.x() + k[0] * step, lo.y() + k[1] * step, lo.z() + k[2] * step);
    return Pose(rot_z(2.0 * kPi * k[3] / size[3]), p);
  }
};

class Search {
 public:
  Search(const Scene& scene, const Operation& op, const PlannerConfig& config, CandidateCache* cache)
      : scene_(scene), op_(op), config_(config), cache_(cache),
        grasps_(generate_edge_grasps(scene.board, scene.grasp)),
        weights_(config.weights.value_or(variant_weights(config.variant))),
        scales_{scene.planner.muscular_scale, scene.planner.peripersonal_scale} {
    weights_.validate();
    result_.message = "no stable candidate within budget";
  }

  PlanResult run() {
    if (config_.budget < 1) throw std::invalid_argument("optimize: budget must be >= 1");
    if (config_.variant == PlannerVariant::kRandom)
      run_random();
    else
      run_grid();
    return result_;
  }

 private:
  bool exhausted() const { return result_.evaluations >= config_.budget; }

  ComfortReport aggregate(const std::vector<HumanChoice>& qh) const {
    return config_.aggregation == Aggregation::kMax ? comfort_max(qh, weights_, scales_)
                                                    : comfort_avg(qh, weights_, scales_);
  }

  // Counts one candidate and returns its report if feasible.
  std::optional<ComfortReport> consume(const GraspOutcome& g) {
    ++result_.evaluations;
    switch (g.stage) {
      case GraspOutcome::Stage::kIkFailed: ++result_.kinematic_rejections; return std::nullopt;
      case GraspOutcome::Stage::kUnstable: ++result_.stability_rejections; return std::nullopt;
      case GraspOutcome::Stage::kHumanInfeasible: ++result_.human_rejections; return std::nullopt;
      case GraspOutcome::Stage::kFeasible: return aggregate(g.qh);
    }
    return std::nullopt;
  }

  void accept(const Pose& object_pose, int grasp_index, const GraspOutcome& g, ComfortReport report) {
    result_.status = PlanStatus::kOk;
    result_.q_r = g.q_r;
    result_.object_pose = object_pose;
    result_.grasp = grasps_[grasp_index];
    result_.grasp_index = grasp_index;
    result_.report = std::move(report);
    result_.message.clear();
  }

  void run_random() {
    std::mt19937_64 rng(config_.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ObjectSearch& s = scene_.search;
    std::vector<int> order(grasps_.size());
    while (!exhausted()) {
      Vector3d p;
      for (int d = 0; d < 3; ++d) p[d] = s.workspace_min[d] + unit(rng) * (s.workspace_max[d] - s.workspace_min[d]);
      const Pose object_pose(rot_z(2.0 * kPi * unit(rng)), p);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      LazyKinematics kin{scene_, op_, object_pose, std::nullopt};
      for (int gi : order) {
        if (exhausted()) return;
        const GraspOutcome g = evaluate_grasp_with(scene_, op_, object_pose, grasps_[gi], [&]() -> const HumanKinematicSet& { return kin.get(); });
        if (auto report = consume(g)) {
          accept(object_pose, gi, g, std::move(*report));
          return;
        }
      }
    }
  }

  std::shared_ptr<const PoseEvaluation> pose_evaluation(const Grid& grid, const CandidateCache::Key& key) {
    if (cache_) {
      if (auto hit = cache_->find(key)) return hit;
    }
    const Pose object_pose = grid.pose(key);
    LazyKinematics kin{scene_, op_, object_pose, std::nullopt};
    auto eval = std::make_shared<PoseEvaluation>();
    for (const auto& grasp : grasps_)
      eval->grasps.push_back(evaluate_grasp_with(scene_, op_, object_pose, grasp, [&]() -> const HumanKinematicSet& { return kin.get(); }));
    if (cache_) cache_->insert(key, eval);
    return eval;
  }

  // Best score at a grid cell, or nullopt when nothing there is feasible.
  // Memoized per run, so revisits do not spend budget.
  std::optional<double> score_cell(const Grid& grid, const CandidateCache::Key& key) {
    if (auto it = scores_.find(key); it != scores_.end()) return it->second;
    if (exhausted()) return std::nullopt;
    const auto eval = pose_evaluation(grid, key);
    std::optional<double> best;
    for (std::size_t gi = 0; gi < eval->grasps.size() && !exhausted(); ++gi) {
      const GraspOutcome& g = eval->grasps[gi];
      auto report = consume(g);
      if (!report) continue;
      const double c = report->combined;
      if (!best || c > *best) best = c;
      if (result_.status != PlanStatus::kOk || c > result_.report.combined)
        accept(grid.pose(key), static_cast<int>(gi), g, std::move(*report));
    }
    scores_[key] = best;
    return best;
  }

  void run_grid() {
    const Grid grid(scene_.search);
    std::mt19937_64 rng(config_.seed);
    std::uniform_int_distribution<long> pick(0, grid.cells() - 1);
    const long n_starts = std::min<long>(std::max(1, config_.starts), grid.cells());
    std::vector<CandidateCache::Key> starts;
    std::set<long> taken;
    while (static_cast<long>(starts.size()) < n_starts) {
      const long idx = pick(rng);
      if (taken.insert(idx).second) starts.push_back(grid.key(idx));
    }

    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < starts.size(); ++i) {
      if (exhausted()) break;
      if (auto s = score_cell(grid, starts[i])) ranked.emplace_back(*s, i);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    const std::size_t k = std::min<std::size_t>(std::max(0, config_.refine_top_k), ranked.size());
    for (std::size_t r = 0; r < k && !exhausted(); ++r) climb(grid, starts[ranked[r].second], ranked[r].first);
    if (k == 0) return;

    // Spend what is left on fresh random cells, climbing from any that would
    // have made the initial top-k.
    const double bar = ranked[k - 1].first;
    long misses = 0;
    while (!exhausted() && misses < grid.cells()) {
      const auto key = grid.key(pick(rng));
      if (scores_.count(key)) {
        ++misses;
        continue;
      }
      const auto s = score_cell(grid, key);
      if (s && *s >= bar) climb(grid, key, *s);
    }
  }

  void climb(const Grid& grid, CandidateCache::Key current, double current_score) {
    while (!exhausted()) {
      std::optional<CandidateCache::Key> next;
      double next_score = current_score;
      for (int d = 0; d < 4; ++d) {
        for (int delta : {-1, 1}) {
          CandidateCache::Key nb = current;
          nb[d] += delta;
          if (d == 3) {
            nb[3] = (nb[3] + grid.size[3]) % grid.size[3];
          } else if (nb[d] < 0 || nb[d] >= grid.size[d]) {
            continue;
          }
          const auto s = score_cell(grid, nb);
          if (s && *s > next_score + 1e-12) {
            next_score = *s;
            next = nb;
          }
        }
      }
      if (!next) break;
      current = *next;
      current_score = next_score;
    }
  }

  const Scene& scene_;
  const Operation& op_;
  const PlannerConfig& config_;
  CandidateCache* cache_;
  std::vector<Grasp> grasps_;
  ComfortWeights weights_;
  ComfortScales scales_;
  PlanResult result_;
  std::map<CandidateCache::Key, std::optional<double>> scores_;
};

}  // namespace

GraspOutcome evaluate_grasp(const Scene& scene, const Operation& op, const Pose& object_pose,
                            const Grasp& grasp, const HumanKinematicSet* kinematic_hint) {
  LazyKinematics kin{scene, op, object_pose, std::nullopt};
  return evaluate_grasp_with(scene, op, object_pose, grasp, [&]() -> const HumanKinematicSet& {
    return kinematic_hint ? *kinematic_hint : kin.get();
  });
}

PlanResult optimize(const Scene& scene, const Operation& op, const PlannerConfig& config,
                    CandidateCache* cache) {
  if (!op.is_valid()) throw std::invalid_argument("optimize: invalid operation");
  Search search(scene, op, config, cache);
  return search.run();
}

std::vector<NormalizedRow> normalize_results(
    const std::vector<std::pair<std::string, std::vector<std::optional<ComfortReport>>>>& batches,
    const std::vector<std::optional<ComfortReport>>& baseline) {
  std::vector<std::size_t> common;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    bool all = baseline[i].has_value();
    for (const auto& [name, reports] : batches) {
      if (reports.size() != baseline.size())
        throw std::invalid_argument("normalize_results: planner '" + name + "' has a different operation count");
      all = all && reports[i].has_value();
    }
    if (all) common.push_back(i);
  }
  if (common.empty()) throw std::domain_error("normalize_results: no operation solved by every planner");

  auto means = [&](const std::vector<std::optional<ComfortReport>>& reports) {
    double m = 0.0, p = 0.0;
    for (std::size_t i : common) {
      m += reports[i]->muscular;
      p += reports[i]->peripersonal;
    }
    return std::pair{m / common.size(), p / common.size()};
  };
  const auto [bm, bp] = means(baseline);
  if (bm == 0.0 || bp == 0.0) throw std::domain_error("normalize_results: zero baseline mean");
  std::vector<NormalizedRow> rows;
  for (const auto& [name, reports] : batches) {
    const auto [m, p] = means(reports);
    rows.push_back({name, m / bm, p / bp});
  }
  return rows;
}

}  // namespace hrc
