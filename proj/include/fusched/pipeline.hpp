#pragma once

#include <optional>
#include <string>

#include "fusched/ilp_model.hpp"
#include "fusched/schedule.hpp"
#include "fusched/solver.hpp"

namespace fusched {

struct RunOptions {
  int delta_multiplier = 3;
  IlpOptions ilp;
  SolveLimits limits;
  std::optional<int> cores;             ///< overrides the DAG's core count
  std::optional<MetricConfig> metrics;  ///< overrides the DAG's metric config
  std::string backend;                  ///< empty: $FUSCHED_BACKEND or the default
};

struct CaseResult {
  Problem problem;
  SolveOutcome outcome;
  std::optional<Schedule> schedule;
  MetricsReport metrics;   ///< recomputed from the schedule
  MetricsReport epigraph;  ///< solver values of the metric variables
  ScheduleCheck check;
  std::size_t variables = 0;
  std::size_t constraints = 0;
};

/// Applies the overrides of `opt` to `dag`.
DagSpec apply_overrides(DagSpec dag, const RunOptions& opt);

/// Builds, solves, extracts, validates and evaluates one DAG.
/// Throws InputError or ModelError before solving; solver problems are in outcome.
CaseResult run_case(const DagSpec& dag, const RunOptions& opt);

/// Metrics that are part of the objective and differ between two reports.
std::vector<std::string> epigraph_mismatches(const MetricsReport& eval, const MetricsReport& epi,
                                             const MetricConfig& metrics);

}  // namespace fusched
