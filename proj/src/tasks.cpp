#include "hrc/tasks.hpp"

#include <cmath>
#include <stdexcept>

#include "json_io.hpp"

namespace hrc {

using namespace io;

void TaskSpec::validate() const {
  const std::string where = "task '" + name + "': ";
  if (!(force > 0.0)) throw std::invalid_argument(where + "force must be > 0");
  switch (kind) {
    case TaskKind::kCircleCut:
      if (points < 3) throw std::invalid_argument(where + "a circle cut needs at least 3 points");
      if (!(radius > 0.0)) throw std::invalid_argument(where + "radius must be > 0");
      break;
    case TaskKind::kGridDrill:
      if (rows < 1 || cols < 1) throw std::invalid_argument(where + "grid must have at least one point");
      if (!(spacing > 0.0)) throw std::invalid_argument(where + "spacing must be > 0");
      break;
    case TaskKind::kExplicit:
      if (explicit_ops.empty()) throw std::invalid_argument(where + "explicit task lists no operations");
      for (const auto& op : explicit_ops)
        if (!op.is_valid()) throw std::invalid_argument(where + "invalid operation");
      break;
  }
}

std::vector<Operation> generate_cutting_ops(double radius, int n, double force, double surface_z) {
  if (n < 3) throw std::invalid_argument("generate_cutting_ops: need at least 3 points");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("generate_cutting_ops: radius must be positive");
  std::vector<Operation> ops;
  ops.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * kPi * k / n;
    const Vector3d tangent(-std::sin(theta), std::cos(theta), 0.0);
    Matrix3d r;
    r.col(0) = tangent;
    r.col(2) = -Vector3d::UnitZ();
    r.col(1) = r.col(2).cross(r.col(0));
    Operation op;
    op.tooltip_pose_object = Pose(r, {radius * std::cos(theta), radius * std::sin(theta), surface_z});
    op.wrench_object = {force * tangent, Vector3d::Zero()};
    ops.push_back(op);
  }
  return ops;
}

std::vector<Operation> generate_drilling_ops(int rows, int cols, double spacing, double force,
                                             double surface_z) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("generate_drilling_ops: empty grid");
  if (!(spacing > 0.0)) throw std::invalid_argument("generate_drilling_ops: spacing must be > 0");
  const Matrix3d r = Vector3d(1.0, -1.0, -1.0).asDiagonal();
  std::vector<Operation> ops;
  ops.reserve(rows * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      Operation op;
      op.tooltip_pose_object =
          Pose(r, {(j - 0.5 * (cols - 1)) * spacing, (i - 0.5 * (rows - 1)) * spacing, surface_z});
      op.wrench_object = {Vector3d(0.0, 0.0, -force), Vector3d::Zero()};
      ops.push_back(op);
    }
  }
  return ops;
}

std::vector<Operation> task_operations(const TaskSpec& task, const BoardObject& board) {
  task.validate();
  const double top = 0.5 * board.thickness;
  switch (task.kind) {
    case TaskKind::kCircleCut: return generate_cutting_ops(task.radius, task.points, task.force, top);
    case TaskKind::kGridDrill: return generate_drilling_ops(task.rows, task.cols, task.spacing, task.force, top);
    case TaskKind::kExplicit: return task.explicit_ops;
  }
  return {};
}

namespace {

TaskSpec parse_task(const json& j) {
  TaskSpec t;
  t.name = j.at("name").get<std::string>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "circle_cut") {
    t.kind = TaskKind::kCircleCut;
    t.radius = j.at("radius_m").get<double>();
    t.points = j.at("points").get<int>();
    t.force = j.at("force_n").get<double>();
  } else if (kind == "grid_drill") {
    t.kind = TaskKind::kGridDrill;
    t.rows = j.at("rows").get<int>();
    t.cols = j.at("cols").get<int>();
    t.spacing = j.at("spacing_m").get<double>();
    t.force = j.at("force_n").get<double>();
  } else if (kind == "explicit") {
    t.kind = TaskKind::kExplicit;
    t.force = 0.0;
    for (const auto& jo : j.at("operations")) {
      Operation op;
      op.tooltip_pose_object = parse_pose(jo.at("tooltip_pose"));
      op.wrench_object.force = vec3(jo.at("force_n"));
      if (jo.contains("moment_nm")) op.wrench_object.moment = vec3(jo.at("moment_nm"));
      t.force = std::max(t.force, op.wrench_object.force.norm());
      t.explicit_ops.push_back(op);
    }
  } else {
    throw std::runtime_error("task '" + t.name + "': unknown kind '" + kind + "'");
  }
  t.validate();
  return t;
}

}  // namespace

std::vector<TaskSpec> parse_tasks(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("tasks: ") + e.what());
  }
  check_schema(j, "tasks");
  std::vector<TaskSpec> out;
  for (const auto& jt : j.at("tasks")) out.push_back(parse_task(jt));
  return out;
}

std::vector<TaskSpec> load_tasks(const std::filesystem::path& path) { return parse_tasks(read_file(path)); }

}  // namespace hrc
