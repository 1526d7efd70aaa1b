#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hrc/operation.hpp"
#include "hrc/scene.hpp"

namespace hrc {

struct ComfortWeights {
  double muscular = 0.5;
  double peripersonal = 0.5;

  void validate() const;
  ComfortWeights scaled(double k) const { return {muscular * k, peripersonal * k}; }
};

// Reference scales that make the two metrics commensurable before weighting.
struct ComfortScales {
  double muscular = 10.0;
  double peripersonal = 0.5;  // m
};

// One feasible human: arm configuration, shoulder pose, and both metrics.
struct HumanChoice {
  ChainConfig q_h;
  Pose shoulder;  // world pose of the arm base (shoulder frame)
  double muscular = 0.0;
  double peripersonal = 0.0;
};

struct ComfortReport {
  double muscular = 0.0;
  double peripersonal = 0.0;  // m
  double combined = 0.0;
  bool stable = false;
  std::optional<HumanChoice> chosen;  // set by max aggregation only
  std::vector<double> qh_muscular;    // muscular comfort of every element of Qh
};

// The five-variable composite configuration of a planned interaction.
struct CompositeConfig {
  ChainConfig q_h;
  RobotConfig q_r;
  Pose human_pose;
  Pose object_pose;
  Grasp grasp;
};

double combined_comfort(double muscular, double peripersonal, const ComfortWeights& w,
                        const ComfortScales& s);

// Human candidate before robot-dependent filtering.
struct HumanCandidate {
  ChainConfig q_h;
  Pose shoulder;
  double muscular = 0.0;
  BodyPointSet points;
};

using HumanKinematicSet = std::vector<HumanCandidate>;

// Candidate shoulder poses of the sampling ring around `tooltip_world`, each
// facing the tooltip horizontally.
std::vector<Pose> human_base_poses(const Scene& scene, const Vector3d& tooltip_world);

// Every (q_h, shoulder) that puts the tool frame on the operation pose, with
// muscular comfort and body points. Independent of the robot configuration.
HumanKinematicSet human_kinematic_set(const Scene& scene, const Pose& object_pose, const Operation& op);

// World points of the robot body at `q_r`.
BodyPointSet robot_body_points(const Scene& scene, const RobotConfig& q_r);

// Qh: the kinematic set minus humans closer than the clearance floor to the
// robot, with peripersonal comfort filled in. Empty means human-infeasible.
std::vector<HumanChoice> feasible_human_set(const Scene& scene, const RobotConfig& q_r,
                                            const HumanKinematicSet& kinematic);
std::vector<HumanChoice> feasible_human_set(const Scene& scene, const RobotConfig& q_r,
                                            const Pose& object_pose, const Operation& op);

// Most comfortable element of Qh. Throws std::invalid_argument on empty Qh.
ComfortReport comfort_max(const std::vector<HumanChoice>& qh, const ComfortWeights& w,
                          const ComfortScales& s);
// Mean comfort over Qh. Throws std::invalid_argument on empty Qh.
ComfortReport comfort_avg(const std::vector<HumanChoice>& qh, const ComfortWeights& w,
                          const ComfortScales& s);

// Edge grasps for the board: opposite short edges, opposite long edges and
// two grippers on one long edge, each with both arm assignments and both
// jaw orientations.
std::vector<Grasp> generate_edge_grasps(const BoardObject& board, const GraspParams& params);

enum class PlannerVariant { kComfort, kMuscular, kPeripersonal, kRandom };

const char* to_string(PlannerVariant v);
PlannerVariant parse_variant(const std::string& s);
ComfortWeights variant_weights(PlannerVariant v);

struct PlannerConfig {
  PlannerVariant variant = PlannerVariant::kComfort;
  int budget = 400;  // candidate (object pose, grasp) evaluations
  std::uint64_t seed = 0;
  int starts = 24;
  int refine_top_k = 3;
  Aggregation aggregation = Aggregation::kMax;
  std::optional<ComfortWeights> weights;  // overrides the variant's weights

  static PlannerConfig from_scene(const Scene& scene, PlannerVariant variant, std::uint64_t seed);
};

// Robot-side result of one (object pose, grasp) candidate. Independent of the
// comfort weights, so planner variants can share it.
struct GraspOutcome {
  enum class Stage { kIkFailed, kUnstable, kHumanInfeasible, kFeasible };
  Stage stage = Stage::kIkFailed;
  RobotConfig q_r;
  StabilityVerdict verdict = StabilityVerdict::kStable;
  std::vector<HumanChoice> qh;
};

// Outcomes of every grasp at one object pose, in grasp order.
struct PoseEvaluation {
  std::vector<GraspOutcome> grasps;
};

// Memo of pose evaluations keyed by object-pose grid cell. Valid for one
// scene and one operation; safe to share between planner runs and threads.
class CandidateCache {
 public:
  using Key = std::array<int, 4>;
  std::shared_ptr<const PoseEvaluation> find(const Key& key) const;
  void insert(const Key& key, std::shared_ptr<const PoseEvaluation> eval);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const PoseEvaluation>> entries_;
};

// Evaluates one grasp at one object pose: robot IK, stability, then Qh.
GraspOutcome evaluate_grasp(const Scene& scene, const Operation& op, const Pose& object_pose,
                            const Grasp& grasp, const HumanKinematicSet* kinematic_hint = nullptr);

enum class PlanStatus { kOk, kNoStableCandidate };

struct PlanResult {
  PlanStatus status = PlanStatus::kNoStableCandidate;
  RobotConfig q_r;
  Pose object_pose;
  Grasp grasp;
  int grasp_index = -1;
  ComfortReport report;
  int evaluations = 0;
  int kinematic_rejections = 0;  // robot IK failed
  int stability_rejections = 0;  // is_stable failed
  int human_rejections = 0;      // Qh empty
  std::string message;

  bool ok() const { return status == PlanStatus::kOk; }
};

// Searches object pose, grasp and robot configuration for an operation.
PlanResult optimize(const Scene& scene, const Operation& op, const PlannerConfig& config,
                    CandidateCache* cache = nullptr);

// Per-task ratio of planner means to the random-planner means.
struct NormalizedRow {
  std::string planner;
  double muscular = 0.0;
  double peripersonal = 0.0;
};

// `batches[p][i]` is planner p's report for operation i; `baseline[i]` the
// random planner's. Operations where any report is missing are skipped.
// Throws std::domain_error for a zero baseline mean.
std::vector<NormalizedRow> normalize_results(
    const std::vector<std::pair<std::string, std::vector<std::optional<ComfortReport>>>>& batches,
    const std::vector<std::optional<ComfortReport>>& baseline);

}  // namespace hrc
