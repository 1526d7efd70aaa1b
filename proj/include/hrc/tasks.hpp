#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hrc/operation.hpp"
#include "hrc/scene.hpp"

namespace hrc {

enum class TaskKind { kCircleCut, kGridDrill, kExplicit };

struct TaskSpec {
  std::string name;
  TaskKind kind = TaskKind::kCircleCut;
  double radius = 0.15;   // circle_cut, m
  int points = 16;        // circle_cut
  int rows = 3;           // grid_drill
  int cols = 3;           // grid_drill
  double spacing = 0.1;   // grid_drill, m
  double force = 30.0;    // N
  std::vector<Operation> explicit_ops;

  void validate() const;
};

// Tooltip poses evenly spaced on a circle of the board plane at height
// `surface_z`, each pushing `force` N along the counter-clockwise tangent.
// Tool frame: x along the cut, z pointing into the board.
std::vector<Operation> generate_cutting_ops(double radius, int n, double force, double surface_z = 0.0);

// rows x cols grid centered on the board, each pushing `force` N into the board.
std::vector<Operation> generate_drilling_ops(int rows, int cols, double spacing, double force,
                                             double surface_z = 0.0);

// Operations of a task on the given board (tooltips on its top face).
std::vector<Operation> task_operations(const TaskSpec& task, const BoardObject& board);

std::vector<TaskSpec> load_tasks(const std::filesystem::path& path);
std::vector<TaskSpec> parse_tasks(const std::string& text);

}  // namespace hrc
