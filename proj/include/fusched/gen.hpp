#pragma once

#include <cstdint>
#include <vector>

#include "fusched/types.hpp"

namespace fusched {

struct GenConfig {
  int node_count = 6;
  int sensor_count = 3;
  int edge_count = 7;
  /// Types drawn for multi-input tasks. One entry gives the same-type mode.
  std::vector<TaskType> fusion_types{TaskType::WFusion};
  int core_count = 2;
  std::uint64_t seed = 1;
  Tick event_wcet_min = 1;
  Tick event_wcet_max = 5;
  double util_min = 0.1;
  double util_max = 0.4;
  std::vector<Tick> periods{20, 40, 50, 100};
};

/// Throws InputError when no DAG can satisfy the config.
void check_config(const GenConfig& config);

/// Random connected DAG. Sensors are the only sources and come first; single-input
/// tasks are subscriptions (I-fusion after a branch), multi-input tasks are fusions.
/// Metrics: every metric, the last task as sink, WCRT from the first sensor reaching it.
DagSpec generate(const GenConfig& config);

/// Small random DAGs for exhaustive cross-checks: at most four tasks and
/// `max_instances` instances over a window of three hyperperiods of 20.
DagSpec generate_tiny(std::uint64_t seed, int max_instances = 10);

}  // namespace fusched
