#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fusched {

/// Discrete time. One tick is one millisecond in every shipped case study.
using Tick = std::int64_t;

enum class TaskType { Sensor, Subscription, TFusion, WFusion, IFusion };

std::string_view to_string(TaskType type);
std::optional<TaskType> parse_task_type(std::string_view text);

inline bool is_timer(TaskType t) { return t == TaskType::Sensor || t == TaskType::TFusion; }
inline bool is_fusion(TaskType t) {
  return t == TaskType::TFusion || t == TaskType::WFusion || t == TaskType::IFusion;
}
/// Sensors and fusion tasks open a new instance index; subscriptions inherit one.
inline bool is_producer(TaskType t) { return t != TaskType::Subscription; }

struct TaskSpec {
  std::string id;
  Tick wcet = 1;
  Tick period = 0;                ///< 0 for event-triggered tasks
  std::optional<Tick> deadline;   ///< relative; defaulted by validate()
  TaskType type = TaskType::Sensor;
  std::vector<std::string> preds; ///< ordered; one entry per incoming edge

  bool operator==(const TaskSpec&) const = default;
};

enum class Metric { MRT, MTD, PAoI, WCRT, MS };

inline constexpr Metric kAllMetrics[] = {Metric::MRT, Metric::MTD, Metric::PAoI, Metric::WCRT,
                                         Metric::MS};

std::string_view to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view text);

struct MetricWeight {
  Metric metric = Metric::MRT;
  double weight = 1.0;
  int priority = 1;  ///< larger values are optimized first

  bool operator==(const MetricWeight&) const = default;
};

struct MetricConfig {
  /// Objective terms. Default: all five metrics, weight 1, one priority level.
  std::vector<MetricWeight> objective = default_objective();
  /// Sinks whose metrics are evaluated. Empty means every sink.
  std::vector<std::string> sinks;
  /// Sensors whose WCRT toward each evaluated sink is reported and optimized.
  /// Empty means every sensor with a path to the sink.
  std::vector<std::string> wcrt_sensors;

  static std::vector<MetricWeight> default_objective();
  bool has(Metric m) const;
  bool operator==(const MetricConfig&) const = default;
};

struct DagSpec {
  std::vector<TaskSpec> tasks;
  int core_count = 1;
  MetricConfig metrics;

  /// Index of the task with this id, or -1.
  int index_of(std::string_view id) const;
  bool operator==(const DagSpec&) const = default;
};

/// Malformed user input (spec files, flags, presets).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structurally valid input for which no consistent model can be built.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fusched
