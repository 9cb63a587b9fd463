#include "fusched/types.hpp"

#include <algorithm>
#include <cctype>

namespace fusched {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(TaskType type) {
  switch (type) {
    case TaskType::Sensor: return "sensor";
    case TaskType::Subscription: return "subscription";
    case TaskType::TFusion: return "t-fusion";
    case TaskType::WFusion: return "w-fusion";
    case TaskType::IFusion: return "i-fusion";
  }
  return "?";
}

std::optional<TaskType> parse_task_type(std::string_view text) {
  const std::string t = lower(text);
  if (t == "sensor" || t == "sen") return TaskType::Sensor;
  if (t == "subscription" || t == "sub") return TaskType::Subscription;
  if (t == "t-fusion" || t == "t-fus" || t == "tfusion") return TaskType::TFusion;
  if (t == "w-fusion" || t == "w-fus" || t == "wfusion") return TaskType::WFusion;
  if (t == "i-fusion" || t == "i-fus" || t == "ifusion") return TaskType::IFusion;
  return std::nullopt;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::MRT: return "MRT";
    case Metric::MTD: return "MTD";
    case Metric::PAoI: return "PAoI";
    case Metric::WCRT: return "WCRT";
    case Metric::MS: return "MS";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view text) {
  const std::string t = lower(text);
  if (t == "mrt") return Metric::MRT;
  if (t == "mtd") return Metric::MTD;
  if (t == "paoi") return Metric::PAoI;
  if (t == "wcrt") return Metric::WCRT;
  if (t == "ms" || t == "makespan") return Metric::MS;
  return std::nullopt;
}

std::vector<MetricWeight> MetricConfig::default_objective() {
  std::vector<MetricWeight> out;
  for (Metric m : kAllMetrics) out.push_back({m, 1.0, 1});
  return out;
}

bool MetricConfig::has(Metric m) const {
  return std::any_of(objective.begin(), objective.end(),
                     [m](const MetricWeight& w) { return w.metric == m; });
}

int DagSpec::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace fusched
