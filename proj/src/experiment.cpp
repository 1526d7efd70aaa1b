#include "hrc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hrc {

std::uint64_t operation_seed(std::uint64_t run_seed, std::size_t task_index, std::size_t op_index) {
  // splitmix64 finalizer over a packed key
  std::uint64_t z = run_seed * 0x9E3779B97F4A7C15ULL + (task_index << 32) + op_index + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ExperimentBundle run_experiment(const Scene& scene, const std::vector<TaskSpec>& tasks,
                                const std::vector<PlannerVariant>& planners, std::uint64_t seed,
                                const ExperimentOptions& options) {
  scene.validate();
  ExperimentBundle bundle;
  bundle.seed = seed;
  bundle.planners = planners;
  if (planners.empty()) return bundle;

  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const TaskSpec& task = tasks[t];
    bundle.tasks.push_back(task.name);
    const auto ops = task_operations(task, scene.board);
    for (std::size_t i = 0; i < ops.size(); ++i) {
      CandidateCache cache;
      const std::uint64_t op_seed = operation_seed(seed, t, i);
      for (PlannerVariant v : planners) {
        OperationRecord rec;
        rec.task = task.name;
        rec.op_index = static_cast<int>(i);
        rec.planner = v;
        rec.seed = op_seed;
        rec.op = ops[i];
        PlannerConfig cfg = PlannerConfig::from_scene(scene, v, op_seed);
        if (options.budget) cfg.budget = *options.budget;
        cfg.aggregation = options.aggregation;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          rec.result = optimize(scene, ops[i], cfg, &cache);
        } catch (const std::exception& e) {
          rec.error = e.what();
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (options.on_record) options.on_record(rec);
        bundle.records.push_back(std::move(rec));
      }
    }
  }
  return bundle;
}

NormalizedTable normalize_bundle(const ExperimentBundle& bundle) {
  NormalizedTable table;
  bool has_random = false;
  for (auto v : bundle.planners) has_random = has_random || v == PlannerVariant::kRandom;
  if (!has_random) return table;

  for (const auto& task : bundle.tasks) {
    std::map<PlannerVariant, std::vector<std::optional<ComfortReport>>> per_planner;
    for (const auto& rec : bundle.records) {
      if (rec.task != task) continue;
      auto& v = per_planner[rec.planner];
      if (static_cast<int>(v.size()) <= rec.op_index) v.resize(rec.op_index + 1);
      if (rec.feasible()) v[rec.op_index] = rec.result->report;
    }
    std::vector<std::pair<std::string, std::vector<std::optional<ComfortReport>>>> batches;
    for (auto v : bundle.planners) batches.emplace_back(to_string(v), per_planner[v]);
    const auto& baseline = per_planner[PlannerVariant::kRandom];
    int common = 0;
    for (std::size_t i = 0; i < baseline.size(); ++i) {
      bool all = true;
      for (const auto& [name, reports] : batches) all = all && i < reports.size() && reports[i].has_value();
      common += all ? 1 : 0;
    }
    try {
      for (const auto& row : normalize_results(batches, baseline))
        table.rows.push_back({task, row.planner, row.muscular, row.peripersonal, common});
    } catch (const std::domain_error&) {
      // no operation solved by every planner: the task gets no normalized row
    }
  }
  return table;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

double yaw_of(const Matrix3d& r) { return std::atan2(r(1, 0), r(0, 0)); }

std::string csv_text(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n' || c == '"') c = ';';
  return s;
}

const char* record_status(const OperationRecord& rec) {
  if (!rec.result) return "error";
  return rec.result->ok() ? "ok" : "infeasible";
}

}  // namespace

std::string raw_records_csv(const ExperimentBundle& bundle) {
  std::ostringstream os;
  os << "task,op_index,planner,seed,status,muscular,peripersonal_m,combined,qh_size,grasp_index,"
        "object_x_m,object_y_m,object_z_m,object_yaw_rad,human_x_m,human_y_m,human_z_m,human_yaw_rad,"
        "evaluations,kinematic_rejections,stability_rejections,human_rejections,message\n";
  for (const auto& rec : bundle.records) {
    os << rec.task << ',' << rec.op_index << ',' << to_string(rec.planner) << ',' << rec.seed << ','
       << record_status(rec) << ',';
    if (rec.feasible()) {
      const PlanResult& r = *rec.result;
      os << num(r.report.muscular) << ',' << num(r.report.peripersonal) << ',' << num(r.report.combined) << ','
         << r.report.qh_muscular.size() << ',' << r.grasp_index << ',' << num(r.object_pose.translation.x())
         << ',' << num(r.object_pose.translation.y()) << ',' << num(r.object_pose.translation.z()) << ','
         << num(yaw_of(r.object_pose.rotation)) << ',';
      if (r.report.chosen) {
        const Pose& h = r.report.chosen->shoulder;
        os << num(h.translation.x()) << ',' << num(h.translation.y()) << ',' << num(h.translation.z()) << ','
           << num(yaw_of(h.rotation)) << ',';
      } else {
        os << ",,,,";
      }
    } else {
      os << ",,,,,,,,,,,,,";
    }
    if (rec.result) {
      const PlanResult& r = *rec.result;
      os << r.evaluations << ',' << r.kinematic_rejections << ',' << r.stability_rejections << ','
         << r.human_rejections << ',' << csv_text(r.message);
    } else {
      os << ",,,," << csv_text(rec.error);
    }
    os << '\n';
  }
  return os.str();
}

std::string normalized_csv(const NormalizedTable& table) {
  std::ostringstream os;
  os << "task,planner,muscular_normalized,peripersonal_normalized,common_operations\n";
  for (const auto& r : table.rows)
    os << r.task << ',' << r.planner << ',' << num(r.muscular) << ',' << num(r.peripersonal) << ','
       << r.operations << '\n';
  return os.str();
}

std::string curves_csv(const ExperimentBundle& bundle) {
  std::ostringstream os;
  os << "task,op_index,planner,status,best_muscular,worst_muscular,qh_size\n";
  for (const auto& rec : bundle.records) {
    os << rec.task << ',' << rec.op_index << ',' << to_string(rec.planner) << ',' << record_status(rec) << ',';
    if (rec.feasible() && !rec.result->report.qh_muscular.empty()) {
      const auto& m = rec.result->report.qh_muscular;
      os << num(*std::max_element(m.begin(), m.end())) << ',' << num(*std::min_element(m.begin(), m.end()))
         << ',' << m.size();
    } else {
      os << ",,0";
    }
    os << '\n';
  }
  return os.str();
}

std::string curve_solutions_csv(const ExperimentBundle& bundle) {
  std::ostringstream os;
  os << "task,op_index,planner,solution_index,muscular\n";
  for (const auto& rec : bundle.records) {
    if (!rec.feasible()) continue;
    const auto& m = rec.result->report.qh_muscular;
    for (std::size_t k = 0; k < m.size(); ++k)
      os << rec.task << ',' << rec.op_index << ',' << to_string(rec.planner) << ',' << k << ',' << num(m[k])
         << '\n';
  }
  return os.str();
}

std::string timing_csv(const ExperimentBundle& bundle) {
  std::ostringstream os;
  os << "task,op_index,planner,seconds\n";
  for (const auto& rec : bundle.records)
    os << rec.task << ',' << rec.op_index << ',' << to_string(rec.planner) << ',' << num(rec.seconds) << '\n';
  return os.str();
}

void emit_reports(const ExperimentBundle& bundle, const std::filesystem::path& out_dir) {
  if (bundle.records.empty()) throw std::invalid_argument("emit_reports: empty bundle");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());
  auto write = [&](const char* name, const std::string& text) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("failed to write '" + path.string() + "'");
  };
  write("raw_records.csv", raw_records_csv(bundle));
  write("normalized.csv", normalized_csv(normalize_bundle(bundle)));
  write("curves.csv", curves_csv(bundle));
  write("curve_solutions.csv", curve_solutions_csv(bundle));
  write("timing.csv", timing_csv(bundle));
}

}  // namespace hrc
