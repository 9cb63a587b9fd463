#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fusched/schedule.hpp"

namespace fusched {

struct BruteLimits {
  int max_instances = 10;
  Tick max_delta = 60;
  Tick grid = 1;              ///< start times are multiples of this
  double time_limit = 60.0;   ///< seconds
  /// Objective per level known to be attainable. Subtrees whose bound is worse
  /// are pruned from the start; if no schedule at or below it exists the
  /// result is Infeasible.
  std::vector<double> cutoff;
};

struct BruteResult {
  SolveOutcome outcome;       ///< objective per level; assignment stays empty
  std::optional<Schedule> schedule;
  MetricsReport metrics;
  std::uint64_t nodes = 0;
};

/// Exhaustive search independent of the ILP formulation. Enumerates input
/// selections, deadline witnesses, core assignments and the order of every
/// pair of instances sharing a core. Start times for a fixed choice are the
/// least solution of the resulting difference constraints, repeated under
/// every admissible bound on the sensor start gaps.
/// Throws InputError when the instance or window cap is exceeded.
BruteResult brute_force_solve(const Problem& problem, const MetricConfig& metrics,
                              const BruteLimits& limits = {});

}  // namespace fusched
