#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hrc/experiment.hpp"

namespace fs = std::filesystem;
using namespace hrc;

namespace {

fs::path default_tasks(const fs::path& scene) { return scene.parent_path() / "tasks.json"; }

Aggregation parse_aggregation(const std::string& s) {
  if (s == "max") return Aggregation::kMax;
  if (s == "average") return Aggregation::kAverage;
  throw std::invalid_argument("aggregation must be 'max' or 'average'");
}

void print_result(const PlanResult& r) {
  if (!r.ok()) {
    std::printf("status: infeasible (%s)\n", r.message.c_str());
  } else {
    const Vector3d& p = r.object_pose.translation;
    std::printf("status: ok\n");
    std::printf("object position: %.4f %.4f %.4f m, yaw %.1f deg\n", p.x(), p.y(), p.z(),
                rad2deg(std::atan2(r.object_pose.rotation(1, 0), r.object_pose.rotation(0, 0))));
    std::printf("grasp: %d\n", r.grasp_index);
    std::printf("muscular comfort: %.6g\nperipersonal comfort: %.6g m\ncombined: %.6g\n", r.report.muscular,
                r.report.peripersonal, r.report.combined);
    std::printf("feasible humans: %zu\n", r.report.qh_muscular.size());
    if (r.report.chosen) {
      const Vector3d& h = r.report.chosen->shoulder.translation;
      std::printf("human shoulder: %.3f %.3f %.3f m\n", h.x(), h.y(), h.z());
    }
  }
  std::printf("evaluations: %d (kinematic rejections %d, stability rejections %d, human rejections %d)\n",
              r.evaluations, r.kinematic_rejections, r.stability_rejections, r.human_rejections);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Comfort-aware planner for forceful human-robot collaboration"};
  app.require_subcommand(1);

  std::string scene_path = "data/scene.json";
  std::string tasks_path;
  std::vector<std::string> variants;
  std::string variant = "comfort";
  std::uint64_t seed = 0;
  int budget = 0;
  std::string out_dir;
  std::string aggregation = "max";
  std::string task_name;
  int op_index = 0;
  std::vector<double> weights;
  int starts = 0;
  int top_k = 0;
  double position_step = 0.0;
  double yaw_step = 0.0;

  auto add_search_flags = [&](CLI::App* cmd) {
    cmd->add_option("--starts", starts, "Random start cells (0: scene default)");
    cmd->add_option("--refine-top-k", top_k, "Start cells refined by local search (0: scene default)");
    cmd->add_option("--position-step", position_step, "Object position grid step in m (0: scene default)");
    cmd->add_option("--yaw-step-deg", yaw_step, "Object yaw grid step in degrees (0: scene default)");
  };

  auto* plan = app.add_subcommand("plan", "Plan a single operation");
  plan->add_option("--scene", scene_path, "Scene file")->check(CLI::ExistingFile);
  plan->add_option("--tasks", tasks_path, "Task file (default: tasks.json next to the scene)");
  plan->add_option("--task", task_name, "Task name (default: first task)");
  plan->add_option("--op", op_index, "Operation index within the task");
  plan->add_option("--variant", variant, "comfort | muscular | peripersonal | random");
  plan->add_option("--seed", seed, "RNG seed");
  plan->add_option("--budget", budget, "Candidate evaluation budget (0: scene default)");
  plan->add_option("--aggregation", aggregation, "max | average");
  plan->add_option("--weights", weights, "Muscular and peripersonal weights (default: the variant's)")
      ->expected(2);
  plan->add_option("--out-dir", out_dir, "Write report files for this run here");
  add_search_flags(plan);

  auto* bench = app.add_subcommand("bench", "Run every planner on every task operation");
  bench->add_option("--scene", scene_path, "Scene file")->check(CLI::ExistingFile);
  bench->add_option("--tasks", tasks_path, "Task file (default: tasks.json next to the scene)");
  bench->add_option("--variant", variants, "Planner variants (default: all four)");
  bench->add_option("--seed", seed, "RNG seed");
  bench->add_option("--budget", budget, "Candidate evaluation budget (0: scene default)");
  bench->add_option("--aggregation", aggregation, "max | average");
  bench->add_option("--out-dir", out_dir, "Output directory")->required();
  add_search_flags(bench);

  std::vector<std::string> check_files;
  auto* check = app.add_subcommand("check", "Validate scene files");
  check->add_option("scenes", check_files, "Scene files")->required();

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) {
    int bad = 0;
    for (const auto& f : check_files) {
      const auto problems = check_scene(f);
      if (problems.empty()) {
        std::printf("%s: ok\n", f.c_str());
      } else {
        ++bad;
        for (const auto& p : problems) std::printf("%s: %s\n", f.c_str(), p.c_str());
      }
    }
    return bad == 0 ? 0 : 1;
  }

  try {
    Scene scene = load_scene(scene_path);
    if (starts > 0) scene.planner.starts = starts;
    if (top_k > 0) scene.planner.refine_top_k = top_k;
    if (position_step > 0.0) scene.search.position_step = position_step;
    if (yaw_step > 0.0) scene.search.yaw_step_deg = yaw_step;
    scene.validate();
    const auto tasks = load_tasks(tasks_path.empty() ? default_tasks(scene_path) : fs::path(tasks_path));
    ExperimentOptions options;
    if (budget > 0) options.budget = budget;
    options.aggregation = parse_aggregation(aggregation);

    if (plan->parsed()) {
      const TaskSpec* task = tasks.empty() ? nullptr : &tasks.front();
      for (const auto& t : tasks)
        if (t.name == task_name) task = &t;
      if (!task || (!task_name.empty() && task->name != task_name))
        throw std::invalid_argument("unknown task '" + task_name + "'");
      const auto ops = task_operations(*task, scene.board);
      if (op_index < 0 || op_index >= static_cast<int>(ops.size()))
        throw std::invalid_argument("operation index out of range");
      PlannerConfig cfg = PlannerConfig::from_scene(scene, parse_variant(variant), seed);
      if (options.budget) cfg.budget = *options.budget;
      cfg.aggregation = options.aggregation;
      if (!weights.empty()) {
        cfg.weights = ComfortWeights{weights[0], weights[1]};
        cfg.weights->validate();
      }
      const PlanResult r = optimize(scene, ops[op_index], cfg);
      print_result(r);
      if (!out_dir.empty()) {
        ExperimentBundle b;
        b.seed = seed;
        b.tasks = {task->name};
        b.planners = {cfg.variant};
        OperationRecord rec;
        rec.task = task->name;
        rec.op_index = op_index;
        rec.planner = cfg.variant;
        rec.seed = seed;
        rec.op = ops[op_index];
        rec.result = r;
        b.records.push_back(rec);
        emit_reports(b, out_dir);
      }
      return r.ok() ? 0 : 2;
    }

    std::vector<PlannerVariant> planners;
    if (variants.empty())
      planners = {PlannerVariant::kComfort, PlannerVariant::kMuscular, PlannerVariant::kPeripersonal,
                  PlannerVariant::kRandom};
    for (const auto& v : variants) planners.push_back(parse_variant(v));
    options.on_record = [](const OperationRecord& rec) {
      std::fprintf(stderr, "%s #%d %-12s %-10s %.2fs\n", rec.task.c_str(), rec.op_index, to_string(rec.planner),
                   rec.feasible() ? "ok" : "infeasible", rec.seconds);
    };
    const ExperimentBundle bundle = run_experiment(scene, tasks, planners, seed, options);
    emit_reports(bundle, out_dir);
    for (const auto& row : normalize_bundle(bundle).rows)
      std::printf("%-10s %-12s muscular %8.3f  peripersonal %6.3f  (%d ops)\n", row.task.c_str(),
                  row.planner.c_str(), row.muscular, row.peripersonal, row.operations);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
