#include <doctest.h>

#include <random>

#include "hrc/planner.hpp"
#include "hrc/tasks.hpp"
#include "test_util.hpp"

using namespace hrc;

namespace {

const Scene& default_scene() {
  static const Scene s = load_scene(HRC_DATA_DIR "/scene.json");
  return s;
}

HumanChoice choice(double m, double p) {
  HumanChoice h;
  h.muscular = m;
  h.peripersonal = p;
  h.q_h = Eigen::VectorXd::Constant(7, m);
  return h;
}

// Scene whose robot stands far away, so clearance never filters humans.
Scene remote_robot_scene() {
  Scene s = default_scene();
  s.robot.base_pose = Pose::from_translation({20, 0, 0});
  return s;
}

RobotConfig seed_config(const Scene& s) { return s.robot_seeds.front(); }

}  // namespace

TEST_CASE("combined comfort normalizes each metric by its scale") {
  const ComfortScales s{10.0, 0.5};
  CHECK(combined_comfort(20.0, 0.25, {0.5, 0.5}, s) == doctest::Approx(0.5 * 2.0 + 0.5 * 0.5));
  CHECK(combined_comfort(20.0, 0.25, {1.0, 0.0}, s) == doctest::Approx(2.0));
  CHECK_THROWS_AS(ComfortWeights({0.0, 0.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(ComfortWeights({-1.0, 1.0}).validate(), std::invalid_argument);
}

TEST_CASE("comfort_max examples") {
  const ComfortScales s;
  const ComfortReport one = comfort_max({choice(3.0, 0.4)}, {}, s);
  CHECK(one.muscular == 3.0);
  CHECK(one.peripersonal == 0.4);
  REQUIRE(one.chosen);
  CHECK(one.combined == doctest::Approx(combined_comfort(3.0, 0.4, {}, s)));

  // three elements: exhaustive oracle over the listed values
  const std::vector<HumanChoice> qh = {choice(2.0, 0.9), choice(9.0, 0.1), choice(5.0, 0.5)};
  for (const ComfortWeights w : {ComfortWeights{0.5, 0.5}, ComfortWeights{1, 0}, ComfortWeights{0, 1},
                                 ComfortWeights{0.2, 0.9}}) {
    double best = -1e300;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < qh.size(); ++i) {
      const double v = w.muscular * qh[i].muscular / s.muscular + w.peripersonal * qh[i].peripersonal / s.peripersonal;
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    const ComfortReport r = comfort_max(qh, w, s);
    CHECK(r.combined == doctest::Approx(best).epsilon(1e-15));
    CHECK(r.muscular == qh[arg].muscular);
  }
  CHECK(comfort_max(qh, {1, 0}, s).muscular == 9.0);
  CHECK_THROWS_AS(comfort_max({}, {}, s), std::invalid_argument);
}

TEST_CASE("comfort_max argmax invariances on random sets") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> m(0.1, 50.0), p(0.05, 1.0), k(0.1, 10.0);
  for (int c = 0; c < 200; ++c) {
    std::vector<HumanChoice> qh;
    for (int i = 0; i < 12; ++i) qh.push_back(choice(m(rng), p(rng)));
    // zero peripersonal weight: argmax is the pure muscular argmax
    const ComfortReport r = comfort_max(qh, {0.7, 0.0}, {});
    double best = 0.0;
    for (const auto& h : qh) best = std::max(best, h.muscular);
    CHECK(r.muscular == best);
    // positive rescaling of the weights keeps the argmax
    const ComfortWeights w{0.3, 0.8};
    const double kk = k(rng);
    CHECK(comfort_max(qh, w, {}).chosen->q_h == comfort_max(qh, w.scaled(kk), {}).chosen->q_h);
  }
}

TEST_CASE("comfort_avg examples") {
  const ComfortScales s;
  const ComfortWeights w{0.5, 0.5};
  CHECK(comfort_avg({choice(3.0, 0.4)}, w, s).combined == comfort_max({choice(3.0, 0.4)}, w, s).combined);
  const double a = combined_comfort(2.0, 0.3, w, s), b = combined_comfort(6.0, 0.7, w, s);
  CHECK(comfort_avg({choice(2.0, 0.3), choice(6.0, 0.7)}, w, s).combined == doctest::Approx((a + b) / 2).epsilon(1e-15));
  CHECK_FALSE(comfort_avg({choice(2.0, 0.3)}, w, s).chosen);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> m(0.1, 50.0), p(0.05, 1.0);
  for (int c = 0; c < 50; ++c) {
    std::vector<HumanChoice> qh;
    double sum = 0.0;
    for (int i = 0; i < 10; ++i) {
      qh.push_back(choice(m(rng), p(rng)));
      sum += 0.5 * qh.back().muscular / 10.0 + 0.5 * qh.back().peripersonal / 0.5;
    }
    CHECK(std::abs(comfort_avg(qh, w, s).combined - sum / 10.0) < 1e-12);
  }
  CHECK_THROWS_AS(comfort_avg({}, w, s), std::invalid_argument);
}

TEST_CASE("feasible human set") {
  const Scene scene = remote_robot_scene();
  // Tool held horizontally at chest height.
  Operation op;
  op.tooltip_pose_object = Pose(rot_y(-kPi / 2), Vector3d::Zero());
  op.wrench_object = {{10, 0, 0}, Vector3d::Zero()};
  const Pose object = Pose::from_translation({0, 0, 1.2});

  const auto qh = feasible_human_set(scene, seed_config(scene), object, op);
  REQUIRE(!qh.empty());
  // some sampled base 0.5 m from the tool has at least two arm solutions
  int best_count = 0;
  for (const auto& a : qh) {
    const double r = (a.shoulder.translation - Vector3d(0, 0, 1.2)).head<2>().norm();
    if (std::abs(r - 0.5) > 1e-9) continue;
    int n = 0;
    for (const auto& b : qh) n += (b.shoulder.translation - a.shoulder.translation).norm() < 1e-12;
    best_count = std::max(best_count, n);
  }
  CHECK(best_count >= 2);

  // every element puts the tool on the operation pose
  const Pose tool = compose(object, op.tooltip_pose_object);
  for (const auto& h : qh) {
    const Pose hand = compose(h.shoulder, forward_kinematics(scene.human_arm, h.q_h).back());
    const Pose t = compose(hand, scene.tool.hand_to_tool);
    CHECK((t.translation - tool.translation).norm() <= 1e-4);
    CHECK(rotation_distance(t.rotation, tool.rotation) <= 1e-3);
  }

  const auto far = feasible_human_set(scene, seed_config(scene), Pose::from_translation({0, 0, 5.0}), op);
  CHECK(far.empty());

  Scene one = scene;
  one.sampling.radius_steps = 1;
  one.sampling.headings = 1;
  const auto sub = feasible_human_set(one, seed_config(one), object, op);
  for (const auto& s : sub) {
    bool found = false;
    for (const auto& h : qh) found = found || ((h.q_h - s.q_h).norm() < 1e-12 && (h.shoulder.translation - s.shoulder.translation).norm() < 1e-12);
    CHECK(found);
  }
}

TEST_CASE("clearance floor removes humans touching the robot") {
  const Scene scene = default_scene();
  Operation op;
  op.tooltip_pose_object = Pose(rot_y(kPi / 2), Vector3d::Zero());
  op.wrench_object = {{10, 0, 0}, Vector3d::Zero()};
  const Pose object = Pose::from_translation({0.8, 0.0, 1.1});
  const auto kin = human_kinematic_set(scene, object, op);
  const auto robot = robot_body_points(scene, seed_config(scene));
  const auto qh = feasible_human_set(scene, seed_config(scene), kin);
  std::size_t expected = 0;
  for (const auto& c : kin) expected += min_distance_comfort(c.points, robot) >= scene.sampling.clearance;
  CHECK(qh.size() == expected);
}

TEST_CASE("edge grasps") {
  const Scene& scene = default_scene();
  const auto grasps = generate_edge_grasps(scene.board, scene.grasp);
  CHECK(grasps.size() == 12);
  for (const auto& g : grasps) {
    g.validate();
    REQUIRE(g.grippers.size() == 2);
    for (const auto& p : g.grippers) {
      CHECK(std::abs(std::abs(p.rotation.col(1).z()) - 1.0) < 1e-12);  // jaws close across the board faces
      const Vector3d edge = p.translation - scene.grasp.edge_inset * p.rotation.col(2);
      const bool on_x = std::abs(std::abs(edge.x()) - 0.5 * scene.board.length_x) < 1e-12;
      const bool on_y = std::abs(std::abs(edge.y()) - 0.5 * scene.board.width_y) < 1e-12;
      CHECK((on_x || on_y));
    }
  }
}

TEST_CASE("optimize budget accounting, soundness and determinism") {
  const Scene& scene = default_scene();
  const auto ops = generate_cutting_ops(0.15, 16, 30.0, 0.5 * scene.board.thickness);

  PlannerConfig one = PlannerConfig::from_scene(scene, PlannerVariant::kRandom, 3);
  one.budget = 1;
  CHECK(optimize(scene, ops[0], one).evaluations == 1);

  PlannerConfig cfg = PlannerConfig::from_scene(scene, PlannerVariant::kComfort, 5);
  cfg.budget = 600;
  cfg.starts = 32;
  cfg.refine_top_k = 2;
  const PlanResult a = optimize(scene, ops[2], cfg);
  const PlanResult b = optimize(scene, ops[2], cfg);
  CandidateCache cache;
  const PlanResult c = optimize(scene, ops[2], cfg, &cache);
  REQUIRE(a.ok());
  CHECK(a.evaluations <= cfg.budget);
  CHECK(a.evaluations == a.kinematic_rejections + a.stability_rejections + a.human_rejections +
                             (a.evaluations - a.kinematic_rejections - a.stability_rejections - a.human_rejections));
  for (const PlanResult* r : {&b, &c}) {
    CHECK(r->report.combined == a.report.combined);
    CHECK(r->grasp_index == a.grasp_index);
    CHECK(r->evaluations == a.evaluations);
    CHECK((r->object_pose.translation - a.object_pose.translation).norm() == 0.0);
  }

  StabilityOptions so;
  so.moment_length = scene.grasp.moment_length;
  CHECK(is_stable(scene.robot, a.q_r, a.grasp, ops[2], a.object_pose, scene.object_load(), so).stable());

  // positive scaling of the weights selects the same candidate
  PlannerConfig scaled = cfg;
  scaled.weights = variant_weights(cfg.variant).scaled(3.5);
  const PlanResult s = optimize(scene, ops[2], scaled);
  CHECK(s.grasp_index == a.grasp_index);
  CHECK((s.object_pose.translation - a.object_pose.translation).norm() == 0.0);
  CHECK(s.report.combined == doctest::Approx(3.5 * a.report.combined).epsilon(1e-12));
}

TEST_CASE("comfort variant beats random on combined comfort across seeds") {
  const Scene& scene = default_scene();
  const auto ops = generate_cutting_ops(0.15, 16, 30.0, 0.5 * scene.board.thickness);
  double comfort = 0.0, random = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    PlannerConfig cfg = PlannerConfig::from_scene(scene, PlannerVariant::kComfort, seed);
    cfg.budget = 600;
    cfg.starts = 32;
    PlannerConfig rnd = cfg;
    rnd.variant = PlannerVariant::kRandom;
    rnd.weights = variant_weights(PlannerVariant::kRandom);
    rnd.budget = scene.planner.budget;
    const PlanResult a = optimize(scene, ops[2], cfg);
    const PlanResult b = optimize(scene, ops[2], rnd);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    comfort += a.report.combined;
    random += b.report.combined;
  }
  CHECK(comfort >= random);
}

TEST_CASE("normalize_results") {
  auto report = [](double m, double p) {
    ComfortReport r;
    r.muscular = m;
    r.peripersonal = p;
    return std::optional<ComfortReport>(r);
  };
  const std::vector<std::optional<ComfortReport>> base = {report(1, 2), report(3, 1), std::nullopt};
  const auto self = normalize_results({{"random", base}}, base);
  CHECK(self[0].muscular == 1.0);
  CHECK(self[0].peripersonal == 1.0);

  const auto ratio = normalize_results({{"x", {report(2, 4)}}}, {report(1, 2)});
  CHECK(ratio[0].muscular == 2.0);
  CHECK(ratio[0].peripersonal == 2.0);

  // operations missing from any planner are left out of every mean
  const auto partial = normalize_results({{"x", {report(2, 4), std::nullopt, report(9, 9)}}}, base);
  CHECK(partial[0].muscular == 2.0);
  CHECK(partial[0].peripersonal == 2.0);

  CHECK_THROWS_AS(normalize_results({{"x", {report(2, 4)}}}, {report(0, 2)}), std::domain_error);
  CHECK_THROWS_AS(normalize_results({{"x", {std::nullopt}}}, {report(1, 2)}), std::domain_error);
}

TEST_CASE("variant names") {
  for (auto v : {PlannerVariant::kComfort, PlannerVariant::kMuscular, PlannerVariant::kPeripersonal, PlannerVariant::kRandom})
    CHECK(parse_variant(to_string(v)) == v);
  CHECK_THROWS_AS(parse_variant("greedy"), std::invalid_argument);
  CHECK(variant_weights(PlannerVariant::kMuscular).peripersonal == 0.0);
  CHECK(variant_weights(PlannerVariant::kPeripersonal).muscular == 0.0);
}
