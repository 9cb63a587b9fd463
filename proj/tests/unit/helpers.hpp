#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "fusched/types.hpp"

namespace testing {

inline fusched::TaskSpec task(std::string id, fusched::Tick wcet, fusched::Tick period,
                              fusched::TaskType type, std::vector<std::string> preds = {}) {
  fusched::TaskSpec t;
  t.id = std::move(id);
  t.wcet = wcet;
  t.period = period;
  t.type = type;
  t.preds = std::move(preds);
  return t;
}

// Two sensors joined by one fusion task.
inline fusched::DagSpec pair_dag(fusched::TaskType fusion, fusched::Tick p1 = 10,
                                 fusched::Tick p2 = 20) {
  using fusched::TaskType;
  fusched::DagSpec d;
  d.tasks = {task("a", 1, p1, TaskType::Sensor), task("b", 2, p2, TaskType::Sensor),
             task("f", 2, fusion == TaskType::TFusion ? p2 : 0, fusion, {"a", "b"})};
  return d;
}

inline std::filesystem::path temp_dir(const std::string& tag) {
  std::random_device rd;
  auto p = std::filesystem::temp_directory_path() /
           ("fusched_" + tag + "_" + std::to_string(rd()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
