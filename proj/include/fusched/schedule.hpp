#pragma once

#include <map>
#include <string>
#include <vector>

#include "fusched/expansion.hpp"
#include "fusched/ilp_model.hpp"
#include "fusched/solver.hpp"

namespace fusched {

struct ScheduledInstance {
  Tick start = 0;
  Tick finish = 0;
  int core = 0;
  int phase = 1;
  std::vector<int> used;  ///< fusion only: producer instance (1-based) per incoming edge

  bool operator==(const ScheduledInstance&) const = default;
};

struct Schedule {
  Tick hp = 0;
  Tick delta = 0;
  int core_count = 1;
  std::vector<std::string> task_ids;
  std::vector<std::vector<ScheduledInstance>> inst;  ///< [task][j - 1]

  const ScheduledInstance& at(int task, int j) const { return inst[task][j - 1]; }
  int instance_count() const;
  bool operator==(const Schedule&) const = default;
};

/// Decodes an assignment. Throws ModelError when there is no solution or a
/// value that should be integral is off by more than 1e-6.
Schedule extract_schedule(const SolveOutcome& outcome, const IlpModel& model,
                          const Problem& problem);

struct ScheduleCheck {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;  ///< strict last-is-best discrepancies
  bool ok() const { return violations.empty(); }
};

/// Re-states every scheduling rule as arithmetic on the schedule.
ScheduleCheck validate_schedule(const Schedule& schedule, const Problem& problem);

struct SinkMetrics {
  std::string sink;
  Tick mrt = 0, mtd = 0, paoi = 0, ms = 0;
  std::map<std::string, Tick> wcrt;  ///< keyed by sensor id

  bool operator==(const SinkMetrics&) const = default;
};

struct MetricsReport {
  std::vector<SinkMetrics> sinks;
  std::vector<double> levels;  ///< objective value per priority level

  const SinkMetrics* find(const std::string& sink) const;
  bool operator==(const MetricsReport&) const = default;
};

/// Objective value of every level of `metrics` computed from `report` sinks.
std::vector<double> objective_levels(const MetricsReport& report, const MetricConfig& metrics);

/// Metrics from first principles: provenance by forward propagation of the
/// decoded inputs, maxima over instances of phases 2..k.
MetricsReport eval_metrics(const Schedule& schedule, const Problem& problem,
                           const MetricConfig& metrics);

/// Sensor instances (task, j), 1-based and sorted, whose data reaches each
/// instance through the decoded inputs.
std::vector<std::vector<std::vector<std::pair<int, int>>>> provenance_sets(const Schedule& schedule,
                                                                           const Problem& problem);

struct TraceEvent {
  Tick time = 0;
  std::string task;
  int instance = 0;
  int core = 0;
  std::string event;  ///< start, finish or trigger
};

struct ReplayResult {
  MetricsReport metrics;
  std::vector<TraceEvent> trace;
  Schedule timeline;  ///< warm-up plus n + 1 steady hyperperiods, inputs re-derived
};

/// Tiles the steady hyperperiod after the warm-up, re-derives every input as
/// the newest finished output at each start, and measures over the steady part.
ReplayResult replay(const Schedule& schedule, const Problem& problem, const MetricConfig& metrics,
                    int n_hyperperiods);

/// Events of the schedule itself, using its decoded inputs.
std::vector<TraceEvent> schedule_trace(const Schedule& schedule, const Problem& problem);

std::string format_trace(const std::vector<TraceEvent>& trace);
/// Long format: sink,sensor,metric,value
std::string metrics_csv(const MetricsReport& report);

/// Solver epigraph values per sink, in the same shape as eval_metrics.
MetricsReport epigraph_values(const IlpModel& model, const Problem& problem,
                              const SolveOutcome& outcome, const MetricConfig& metrics);

}  // namespace fusched
