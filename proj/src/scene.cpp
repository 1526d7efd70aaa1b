#include "hrc/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "json_io.hpp"

namespace hrc {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

using namespace io;

ChainModel parse_chain(const json& j) {
  ChainModel m;
  m.name = j.value("name", "chain");
  for (const auto& jj : j.at("joints")) {
    Joint joint;
    joint.name = jj.at("name").get<std::string>();
    joint.link = jj.value("link", joint.name);
    if (jj.contains("origin")) joint.origin = parse_pose(jj.at("origin"));
    const Vector3d axis = vec3(jj.at("axis"));
    if (axis.norm() < 1e-12) throw std::runtime_error("joint '" + joint.name + "': zero axis");
    joint.axis = axis.normalized();
    const auto& lim = jj.at("limits_deg");
    joint.min_angle = deg2rad(lim.at(0).get<double>());
    joint.max_angle = deg2rad(lim.at(1).get<double>());
    joint.mass = jj.value("mass_kg", 0.0);
    if (jj.contains("com_m")) joint.com = vec3(jj.at("com_m"));
    m.joints.push_back(std::move(joint));
  }
  if (j.contains("tip")) m.tip = parse_pose(j.at("tip"));
  m.swivel_joint = j.value("swivel_joint", -1);
  if (j.contains("nominal_deg")) m.nominal = vecn(j.at("nominal_deg")) * (kPi / 180.0);
  return m;
}

PointTemplate parse_point_csv(const std::string& text, const std::string& what) {
  PointTemplate tmpl;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("link", 0) == 0) continue;
    }
    std::istringstream row(line);
    std::string link, x, y, z;
    if (!std::getline(row, link, ',') || !std::getline(row, x, ',') || !std::getline(row, y, ',') ||
        !std::getline(row, z, ','))
      throw std::runtime_error(what + ":" + std::to_string(lineno) + ": expected link,x_m,y_m,z_m");
    tmpl.push_back({link, {std::stod(x), std::stod(y), std::stod(z)}});
  }
  return tmpl;
}

const char* aggregation_name(Aggregation a) { return a == Aggregation::kMax ? "max" : "average"; }

Aggregation parse_aggregation(const std::string& s) {
  if (s == "max") return Aggregation::kMax;
  if (s == "average") return Aggregation::kAverage;
  throw std::runtime_error("unknown aggregation '" + s + "'");
}

}  // namespace

ChainModel load_chain_model(const fs::path& path) {
  const json j = read_json(path);
  check_schema(j, path.string());
  return parse_chain(j);
}

RobotModel load_robot_model(const fs::path& path, std::vector<RobotConfig>* seeds) {
  const json j = read_json(path);
  check_schema(j, path.string());
  RobotModel robot;
  robot.name = j.value("name", "robot");
  if (j.contains("base_pose")) robot.base_pose = parse_pose(j.at("base_pose"));
  std::vector<std::vector<Eigen::VectorXd>> arm_seeds;
  for (const auto& ja : j.at("arms")) {
    Arm arm;
    arm.name = ja.at("name").get<std::string>();
    if (ja.contains("mount")) arm.mount = parse_pose(ja.at("mount"));
    arm.chain = parse_chain(ja.at("chain"));
    arm.torque_limits = vecn(ja.at("torque_limits_nm"));
    std::vector<Eigen::VectorXd> s;
    if (ja.contains("ik_seeds_deg"))
      for (const auto& js : ja.at("ik_seeds_deg")) s.push_back(vecn(js) * (kPi / 180.0));
    if (s.empty()) s.push_back(arm.chain.nominal_config());
    arm_seeds.push_back(std::move(s));
    robot.arms.push_back(std::move(arm));
  }
  if (seeds) {
    seeds->clear();
    std::size_t count = arm_seeds.front().size();
    for (const auto& s : arm_seeds) count = std::min(count, s.size());
    for (std::size_t k = 0; k < count; ++k) {
      RobotConfig cfg;
      for (const auto& s : arm_seeds) cfg.push_back(s[k]);
      seeds->push_back(std::move(cfg));
    }
  }
  return robot;
}

TorqueLimitTable load_torque_limits(const fs::path& path) {
  const json j = read_json(path);
  check_schema(j, path.string());
  TorqueLimitTable table;
  for (const auto& jj : j.at("joints")) {
    table.joint_names.push_back(jj.value("name", ""));
    std::vector<TorqueBreakpoint> bps;
    for (const auto& b : jj.at("breakpoints"))
      bps.push_back({deg2rad(b.at("angle_deg").get<double>()), b.at("limit_pos_nm").get<double>(),
                     b.at("limit_neg_nm").get<double>()});
    table.joints.push_back(std::move(bps));
  }
  table.validate();
  return table;
}

PointTemplate load_point_template(const fs::path& path) { return parse_point_csv(read_file(path), path.string()); }

GravityModel Scene::human_gravity() const {
  GravityModel g;
  g.gravity = gravity;
  g.tool_mass = tool.mass;
  g.tool_com = tool.com_hand;
  return g;
}

ObjectLoad Scene::object_load() const { return {board.mass, Vector3d::Zero(), gravity}; }

void Scene::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
  if (schema_version != kSchemaVersion) fail("scene: unsupported schema_version");
  if (!(board.length_x > 0 && board.width_y > 0 && board.thickness > 0)) fail("object: board dimensions must be > 0");
  if (!(board.mass >= 0)) fail("object: negative mass");
  robot.validate();
  if (robot.arms.size() != 2) fail("robot: a bimanual robot needs exactly two arms");
  if (robot_seeds.empty()) fail("robot: no IK seeds");
  for (const auto& s : robot_seeds)
    for (std::size_t i = 0; i < s.size(); ++i)
      if (static_cast<std::size_t>(s[i].size()) != robot.arms[i].chain.dof()) fail("robot: IK seed has wrong length");
  human_arm.validate();
  torque_limits.validate();
  if (torque_limits.joints.size() != human_arm.dof()) fail("torque limits: joint count differs from the human arm");
  human_gravity().validate();
  if (!(tool.mass >= 0)) fail("tool: negative mass");
  if (!tool.hand_to_tool.is_valid()) fail("tool: invalid hand-to-tool pose");
  if (human_points.size() < 2) fail("human points: at least two points required");
  if (robot_points.empty()) fail("robot points: template is empty");
  for (const auto& tp : human_points)
    if (tp.link != kBaseLink && human_arm.link_index(tp.link) < 0)
      fail("human points: unknown link '" + tp.link + "'");
  for (const auto& tp : robot_points) {
    if (tp.link == kBaseLink) continue;
    const auto slash = tp.link.find('/');
    bool found = false;
    if (slash != std::string::npos)
      for (const auto& arm : robot.arms)
        if (arm.name == tp.link.substr(0, slash) && arm.chain.link_index(tp.link.substr(slash + 1)) >= 0) found = true;
    if (!found) fail("robot points: unknown link '" + tp.link + "'");
  }
  if (!(grasp.friction_coefficient > 0 && grasp.max_grip_force > 0 && grasp.contact_patch_halfwidth > 0))
    fail("grasp: friction, grip force and patch must be > 0");
  if (!(grasp.moment_length > 0)) fail("grasp: moment length must be > 0");
  if (!(grasp.edge_inset >= 0 && grasp.edge_inset < 0.5 * std::min(board.length_x, board.width_y)))
    fail("grasp: edge inset out of range");
  if (!(sampling.radius_min > 0 && sampling.radius_min <= sampling.radius_max)) fail("sampling: bad radius range");
  if (sampling.radius_steps < 1 || sampling.headings < 1 || sampling.ik_samples < 1)
    fail("sampling: counts must be >= 1");
  if (!(sampling.clearance >= 0)) fail("sampling: negative clearance");
  if (!(search.workspace_min.array() <= search.workspace_max.array()).all()) fail("search: workspace min > max");
  if (!(search.position_step > 0 && search.yaw_step_deg > 0)) fail("search: steps must be > 0");
  if (planner.budget < 1 || planner.starts < 1 || planner.refine_top_k < 0) fail("planner: bad budget/starts");
  if (!(planner.muscular_scale > 0 && planner.peripersonal_scale > 0)) fail("planner: scales must be > 0");
}

Scene parse_scene(const std::string& text, const fs::path& base_dir) {
  const json j = json::parse(text);
  check_schema(j, "scene");
  Scene s;
  s.schema_version = j.at("schema_version");
  s.robot_file = j.at("robot_file");
  s.human_arm_file = j.at("human_arm_file");
  s.torque_limits_file = j.at("torque_limits_file");
  s.human_points_file = j.at("human_points_file");
  s.robot_points_file = j.at("robot_points_file");

  s.robot = load_robot_model(base_dir / s.robot_file, &s.robot_seeds);
  s.human_arm = load_chain_model(base_dir / s.human_arm_file);
  s.torque_limits = load_torque_limits(base_dir / s.torque_limits_file);
  s.human_points = load_point_template(base_dir / s.human_points_file);
  s.robot_points = load_point_template(base_dir / s.robot_points_file);

  if (j.contains("gravity_mps2")) s.gravity = vec3(j.at("gravity_mps2"));
  if (j.contains("object")) {
    const auto& o = j.at("object");
    s.board.length_x = o.value("length_x_m", s.board.length_x);
    s.board.width_y = o.value("width_y_m", s.board.width_y);
    s.board.thickness = o.value("thickness_m", s.board.thickness);
    s.board.mass = o.value("mass_kg", s.board.mass);
  }
  if (j.contains("tool")) {
    const auto& t = j.at("tool");
    s.tool.mass = t.value("mass_kg", s.tool.mass);
    if (t.contains("com_hand_m")) s.tool.com_hand = vec3(t.at("com_hand_m"));
    if (t.contains("hand_to_tool")) s.tool.hand_to_tool = parse_pose(t.at("hand_to_tool"));
  }
  if (j.contains("grasp")) {
    const auto& g = j.at("grasp");
    s.grasp.friction_coefficient = g.value("friction_coefficient", s.grasp.friction_coefficient);
    s.grasp.max_grip_force = g.value("max_grip_force_n", s.grasp.max_grip_force);
    s.grasp.contact_patch_halfwidth = g.value("contact_patch_halfwidth_m", s.grasp.contact_patch_halfwidth);
    s.grasp.edge_inset = g.value("edge_inset_m", s.grasp.edge_inset);
    s.grasp.moment_length = g.value("moment_length_m", s.grasp.moment_length);
  }
  if (j.contains("human_sampling")) {
    const auto& h = j.at("human_sampling");
    s.sampling.radius_min = h.value("radius_min_m", s.sampling.radius_min);
    s.sampling.radius_max = h.value("radius_max_m", s.sampling.radius_max);
    s.sampling.radius_steps = h.value("radius_steps", s.sampling.radius_steps);
    s.sampling.headings = h.value("headings", s.sampling.headings);
    s.sampling.shoulder_height = h.value("shoulder_height_m", s.sampling.shoulder_height);
    s.sampling.ik_samples = h.value("ik_samples", s.sampling.ik_samples);
    s.sampling.clearance = h.value("clearance_m", s.sampling.clearance);
    s.sampling.robot_keepout = h.value("robot_keepout_m", s.sampling.robot_keepout);
  }
  if (j.contains("object_search")) {
    const auto& o = j.at("object_search");
    if (o.contains("workspace_min_m")) s.search.workspace_min = vec3(o.at("workspace_min_m"));
    if (o.contains("workspace_max_m")) s.search.workspace_max = vec3(o.at("workspace_max_m"));
    s.search.position_step = o.value("position_step_m", s.search.position_step);
    s.search.yaw_step_deg = o.value("yaw_step_deg", s.search.yaw_step_deg);
  }
  if (j.contains("planner")) {
    const auto& p = j.at("planner");
    s.planner.budget = p.value("budget", s.planner.budget);
    s.planner.starts = p.value("starts", s.planner.starts);
    s.planner.refine_top_k = p.value("refine_top_k", s.planner.refine_top_k);
    s.planner.muscular_scale = p.value("muscular_scale", s.planner.muscular_scale);
    s.planner.peripersonal_scale = p.value("peripersonal_scale_m", s.planner.peripersonal_scale);
    s.planner.aggregation = parse_aggregation(p.value("aggregation", std::string("max")));
  }
  return s;
}

Scene load_scene(const fs::path& path) {
  Scene s = parse_scene(read_file(path), path.parent_path());
  s.validate();
  return s;
}

std::string serialize_scene(const Scene& s) {
  json j;
  j["schema_version"] = s.schema_version;
  j["robot_file"] = s.robot_file;
  j["human_arm_file"] = s.human_arm_file;
  j["torque_limits_file"] = s.torque_limits_file;
  j["human_points_file"] = s.human_points_file;
  j["robot_points_file"] = s.robot_points_file;
  j["gravity_mps2"] = to_json(s.gravity);
  j["object"] = {{"length_x_m", canonical(s.board.length_x)},
                 {"width_y_m", canonical(s.board.width_y)},
                 {"thickness_m", canonical(s.board.thickness)},
                 {"mass_kg", canonical(s.board.mass)}};
  j["tool"] = {{"mass_kg", canonical(s.tool.mass)},
               {"com_hand_m", to_json(s.tool.com_hand)},
               {"hand_to_tool", pose_json(s.tool.hand_to_tool)}};
  j["grasp"] = {{"friction_coefficient", canonical(s.grasp.friction_coefficient)},
                {"max_grip_force_n", canonical(s.grasp.max_grip_force)},
                {"contact_patch_halfwidth_m", canonical(s.grasp.contact_patch_halfwidth)},
                {"edge_inset_m", canonical(s.grasp.edge_inset)},
                {"moment_length_m", canonical(s.grasp.moment_length)}};
  j["human_sampling"] = {{"radius_min_m", canonical(s.sampling.radius_min)},
                         {"radius_max_m", canonical(s.sampling.radius_max)},
                         {"radius_steps", s.sampling.radius_steps},
                         {"headings", s.sampling.headings},
                         {"shoulder_height_m", canonical(s.sampling.shoulder_height)},
                         {"ik_samples", s.sampling.ik_samples},
                         {"clearance_m", canonical(s.sampling.clearance)},
                         {"robot_keepout_m", canonical(s.sampling.robot_keepout)}};
  j["object_search"] = {{"workspace_min_m", to_json(s.search.workspace_min)},
                        {"workspace_max_m", to_json(s.search.workspace_max)},
                        {"position_step_m", canonical(s.search.position_step)},
                        {"yaw_step_deg", canonical(s.search.yaw_step_deg)}};
  j["planner"] = {{"budget", s.planner.budget},
                  {"starts", s.planner.starts},
                  {"refine_top_k", s.planner.refine_top_k},
                  {"muscular_scale", canonical(s.planner.muscular_scale)},
                  {"peripersonal_scale_m", canonical(s.planner.peripersonal_scale)},
                  {"aggregation", aggregation_name(s.planner.aggregation)}};
  return j.dump(2) + "\n";
}

std::vector<std::string> check_scene(const fs::path& path) {
  std::vector<std::string> problems;
  try {
    load_scene(path);
  } catch (const std::exception& e) {
    problems.emplace_back(e.what());
  }
  return problems;
}

}  // namespace hrc
