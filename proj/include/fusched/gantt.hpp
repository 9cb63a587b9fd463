#pragma once

#include <string>
#include <vector>

#include "fusched/schedule.hpp"

namespace fusched {

/// SVG timeline with one lane per core and one bar per instance, labeled
/// task.index. Trigger events of fusion tasks in `trace` become arrows.
std::string emit_gantt(const Schedule& schedule, const std::vector<TraceEvent>& trace = {},
                       const std::vector<TaskType>& types = {});

}  // namespace fusched
