#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hrc/planner.hpp"
#include "hrc/tasks.hpp"

namespace hrc {

struct OperationRecord {
  std::string task;
  int op_index = 0;
  PlannerVariant planner = PlannerVariant::kComfort;
  std::uint64_t seed = 0;  // per-operation seed, shared by all planners
  Operation op;
  std::optional<PlanResult> result;  // empty when the planner threw
  std::string error;
  double seconds = 0.0;  // wall clock of the optimize call

  bool feasible() const { return result && result->ok(); }
};

struct ExperimentBundle {
  std::uint64_t seed = 0;
  std::vector<std::string> tasks;  // in run order
  std::vector<PlannerVariant> planners;
  std::vector<OperationRecord> records;  // ordered by task, operation, planner
};

struct ExperimentOptions {
  std::optional<int> budget;  // overrides the scene default
  Aggregation aggregation = Aggregation::kMax;
  std::function<void(const OperationRecord&)> on_record;  // progress hook
};

// Seed of one operation's planner runs, derived from the run seed.
std::uint64_t operation_seed(std::uint64_t run_seed, std::size_t task_index, std::size_t op_index);

// Runs every planner on every operation of every task. Planner exceptions
// are recorded per operation and the run continues.
ExperimentBundle run_experiment(const Scene& scene, const std::vector<TaskSpec>& tasks,
                                const std::vector<PlannerVariant>& planners, std::uint64_t seed,
                                const ExperimentOptions& options = {});

// Per task, the planners' mean comfort divided by the random planner's. Needs
// the random planner in the bundle.
struct NormalizedTable {
  struct Row {
    std::string task;
    std::string planner;
    double muscular = 0.0;
    double peripersonal = 0.0;
    int operations = 0;  // operations solved by every planner
  };
  std::vector<Row> rows;
};

NormalizedTable normalize_bundle(const ExperimentBundle& bundle);

std::string raw_records_csv(const ExperimentBundle& bundle);
std::string normalized_csv(const NormalizedTable& table);
std::string curves_csv(const ExperimentBundle& bundle);
std::string curve_solutions_csv(const ExperimentBundle& bundle);
std::string timing_csv(const ExperimentBundle& bundle);

// Writes raw_records.csv, normalized.csv, curves.csv, curve_solutions.csv and
// timing.csv into `out_dir`. Throws std::runtime_error on write failures.
void emit_reports(const ExperimentBundle& bundle, const std::filesystem::path& out_dir);

}  // namespace hrc
