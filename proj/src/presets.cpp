#include "fusched/presets.hpp"

#include <functional>
#include <map>

namespace fusched {

namespace {

TaskSpec task(std::string id, Tick wcet, Tick period, TaskType type,
              std::vector<std::string> preds = {}) {
  TaskSpec t;
  t.id = std::move(id);
  t.wcet = wcet;
  t.period = period;
  t.type = type;
  t.preds = std::move(preds);
  return t;
}

std::vector<MetricWeight> objective(std::initializer_list<Metric> ms) {
  std::vector<MetricWeight> out;
  for (Metric m : ms) out.push_back({m, 1.0, 1});
  return out;
}

using T = TaskType;

// Two sensor chains joined by a fusion task, then two more stages.
DagSpec fusion_two_chains(const std::string& config) {
  Tick t1 = 0, t2 = 0, t5 = 0, t7 = 0;
  T th5 = T::WFusion, th7 = T::Subscription;
  if (config == "WS") {
    t1 = t2 = 360;
  } else if (config == "WT") {
    t1 = t2 = 420;
    t7 = 840;
    th7 = T::TFusion;
  } else if (config == "TS") {
    t1 = t2 = 420;
    t5 = 840;
    th5 = T::TFusion;
  } else if (config == "TT") {
    t1 = t2 = 480;
    t5 = t7 = 960;
    th5 = th7 = T::TFusion;
  } else if (config == "NH") {
    t1 = 480;
    t2 = 360;
    t5 = t7 = 960;
    th5 = th7 = T::TFusion;
  } else {
    throw InputError("unknown fusion-two-chains configuration '" + config + "'");
  }
  DagSpec d;
  d.tasks = {task("t1", 10, t1, T::Sensor),
             task("t2", 20, t2, T::Sensor),
             task("t3", 10, 0, T::Subscription, {"t1"}),
             task("t4", 20, 0, T::Subscription, {"t2"}),
             task("t5", 30, t5, th5, {"t3", "t4"}),
             task("t6", 30, 0, T::Subscription, {"t5"}),
             task("t7", 30, t7, th7, {"t6"})};
  d.core_count = 1;
  d.metrics.objective = objective({Metric::MRT, Metric::MTD, Metric::PAoI, Metric::WCRT});
  d.metrics.sinks = {"t7"};
  d.metrics.wcrt_sensors = {"t1"};
  return d;
}

DagSpec navigation(int cameras) {
  if (cameras < 1 || cameras > 10) throw InputError("navigation supports m=1..10");
  DagSpec d;
  std::vector<std::string> cams;
  for (int c = 1; c <= cameras; ++c) {
    cams.push_back("cam" + std::to_string(c));
    d.tasks.push_back(task(cams.back(), 5, 100, T::Sensor));
  }
  d.tasks.push_back(task("fusion", 10, 0, T::WFusion, cams));
  d.tasks.push_back(task("perception", 10, 0, T::Subscription, {"fusion"}));
  d.tasks.push_back(task("planning", 10, 0, T::Subscription, {"perception"}));
  d.tasks.push_back(task("control", 10, 0, T::Subscription, {"planning"}));
  d.tasks.push_back(task("actuator", 10, 0, T::Subscription, {"control"}));
  d.core_count = 1;
  d.metrics.sinks = {"actuator"};
  d.metrics.wcrt_sensors = {"cam1"};
  return d;
}

DagSpec two_sensor_fusion(int setting, T type) {
  DagSpec d;
  const Tick p1 = setting == 1 ? 5 : 3;
  const Tick p2 = setting == 1 ? 7 : 4;
  d.tasks = {task("t1", 1, p1, T::Sensor), task("t2", 1, p2, T::Sensor),
             task("t3", 1, 0, type, {"t1", "t2"})};
  d.core_count = setting == 1 ? 1 : 2;
  d.metrics.objective = objective({Metric::MRT, Metric::MTD});
  d.metrics.sinks = {"t3"};
  return d;
}

DagSpec branch(const std::string& config) {
  DagSpec d;
  if (config == "A") {
    d.tasks = {task("t1", 5, 20, T::Sensor), task("t2", 7, 20, T::Sensor),
               task("t3", 5, 0, T::IFusion, {"t1"}),
               task("t4", 5, 0, T::WFusion, {"t1", "t2"}),
               task("t5", 5, 0, T::WFusion, {"t3", "t4"})};
  } else if (config == "B") {
    d.tasks = {task("t1", 5, 15, T::Sensor), task("t2", 7, 20, T::Sensor),
               task("t3", 5, 0, T::IFusion, {"t1"}),
               task("t4", 5, 30, T::TFusion, {"t1", "t2"}),
               task("t5", 5, 0, T::WFusion, {"t3", "t4"})};
  } else {
    throw InputError("unknown branch configuration '" + config + "'");
  }
  d.core_count = 2;
  d.metrics.objective = objective({Metric::MRT, Metric::MTD, Metric::PAoI});
  d.metrics.sinks = {"t5"};
  return d;
}

// Instance-count example: four sensors, a branch, every fusion type.
DagSpec instance_count_example() {
  DagSpec d;
  d.tasks = {task("t1", 1, 10, T::Sensor),
             task("t2", 1, 20, T::Sensor),
             task("t3", 1, 15, T::Sensor),
             task("t4", 1, 30, T::Sensor),
             task("t5", 1, 0, T::Subscription, {"t1"}),
             task("t6", 1, 0, T::Subscription, {"t2"}),
             task("t7", 1, 0, T::Subscription, {"t2"}),
             task("t8", 1, 0, T::IFusion, {"t3", "t4"}),
             task("t9", 1, 0, T::Subscription, {"t6"}),
             task("t10", 1, 20, T::TFusion, {"t5", "t9"}),
             task("t11", 1, 0, T::WFusion, {"t7", "t8"})};
  d.core_count = 1;
  return d;
}

// Three sensor chains feeding one prediction task.
DagSpec toy_prediction(const std::string& kind) {
  T type;
  Tick period = 0;
  if (kind == "t-fus") {
    type = T::TFusion;
    period = 15;
  } else if (kind == "w-fus") {
    type = T::WFusion;
  } else if (kind == "i-fus") {
    type = T::IFusion;
  } else {
    throw InputError("unknown toy-prediction fusion type '" + kind + "'");
  }
  DagSpec d;
  d.tasks = {task("t1", 2, 20, T::Sensor),
             task("t2", 2, 20, T::Sensor),
             task("t3", 2, 20, T::Sensor),
             task("t4", 2, 0, T::Subscription, {"t1"}),
             task("t5", 2, 0, T::Subscription, {"t2"}),
             task("t6", 2, 0, T::Subscription, {"t4"}),
             task("t7", 2, 0, T::Subscription, {"t5"}),
             task("t8", 2, 0, T::Subscription, {"t3"}),
             task("t9", 4, period, type, {"t6", "t7", "t8"})};
  d.core_count = 1;
  return d;
}

const std::map<std::string, std::function<DagSpec()>>& catalog() {
  static const auto* c = [] {
    auto* m = new std::map<std::string, std::function<DagSpec()>>;
    for (const char* k : {"WS", "WT", "TS", "TT", "NH"}) {
      (*m)[std::string("fusion-two-chains:") + k] = [k] { return fusion_two_chains(k); };
    }
    for (int n = 1; n <= 10; ++n) {
      (*m)["navigation:m=" + std::to_string(n)] = [n] { return navigation(n); };
    }
    for (int s : {1, 2}) {
      (*m)["two-sensor:" + std::to_string(s) + ":i-fus"] = [s] { return two_sensor_fusion(s, T::IFusion); };
      (*m)["two-sensor:" + std::to_string(s) + ":w-fus"] = [s] { return two_sensor_fusion(s, T::WFusion); };
    }
    (*m)["branch:A"] = [] { return branch("A"); };
    (*m)["branch:B"] = [] { return branch("B"); };
    (*m)["instance-count-example"] = [] { return instance_count_example(); };
    for (const char* k : {"t-fus", "w-fus", "i-fus"}) {
      (*m)[std::string("toy-prediction:") + k] = [k] { return toy_prediction(k); };
    }
    return m;
  }();
  return *c;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : catalog()) out.push_back(k);
  return out;
}

DagSpec make_preset(const std::string& name) {
  const auto it = catalog().find(name);
  if (it == catalog().end()) throw InputError("unknown preset '" + name + "'");
  return it->second();
}

}  // namespace fusched
