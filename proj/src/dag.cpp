#include "fusched/dag.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

namespace fusched {

namespace {

// Kahn's algorithm with a min-heap so the order is stable under input order.
std::optional<std::vector<int>> topo_sort(const std::vector<std::vector<int>>& preds,
                                          const std::vector<std::vector<int>>& succs) {
  const int n = static_cast<int>(preds.size());
  std::vector<int> indeg(n);
  for (int i = 0; i < n; ++i) indeg[i] = static_cast<int>(preds[i].size());
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int i = 0; i < n; ++i) {
    if (indeg[i] == 0) ready.push(i);
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int i = ready.top();
    ready.pop();
    order.push_back(i);
    for (int s : succs[i]) {
      if (--indeg[s] == 0) ready.push(s);
    }
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

}  // namespace

TaskGraph build_graph(const DagSpec& dag) {
  const int n = static_cast<int>(dag.tasks.size());
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < n; ++i) index.emplace(dag.tasks[i].id, i);

  TaskGraph g;
  g.preds.resize(n);
  g.succs.resize(n);
  for (int i = 0; i < n; ++i) {
    for (const auto& p : dag.tasks[i].preds) {
      auto it = index.find(p);
      if (it == index.end()) {
        throw InputError("task '" + dag.tasks[i].id + "' references unknown predecessor '" + p +
                         "'");
      }
      g.preds[i].push_back(it->second);
      g.succs[it->second].push_back(i);
    }
  }
  auto order = topo_sort(g.preds, g.succs);
  if (!order) throw InputError("task graph contains a cycle");
  g.topo = std::move(*order);
  return g;
}

ValidationResult validate(const DagSpec& input) {
  ValidationResult result;
  auto& errors = result.errors;
  const int n = static_cast<int>(input.tasks.size());

  if (n == 0) errors.push_back("DAG has no tasks");
  if (input.core_count < 1) errors.push_back("core count must be positive");

  std::unordered_map<std::string, int> index;
  for (int i = 0; i < n; ++i) {
    const auto& t = input.tasks[i];
    if (t.id.empty()) errors.push_back("task #" + std::to_string(i) + " has an empty id");
    if (!index.emplace(t.id, i).second) errors.push_back("duplicate task id '" + t.id + "'");
  }

  Tick max_timer_period = 0;
  bool has_sensor = false;
  for (const auto& t : input.tasks) {
    const std::string who = "task '" + t.id + "': ";
    if (t.wcet < 1) errors.push_back(who + "wcet must be >= 1");
    if (is_timer(t.type)) {
      if (t.period < 1) errors.push_back(who + "timer-triggered task needs period >= 1");
      max_timer_period = std::max(max_timer_period, t.period);
    } else if (t.period != 0) {
      errors.push_back(who + "event-triggered task must have period 0");
    }
    switch (t.type) {
      case TaskType::Sensor:
        has_sensor = true;
        if (!t.preds.empty()) errors.push_back(who + "sensor must not have predecessors");
        break;
      case TaskType::Subscription:
        if (t.preds.size() != 1) errors.push_back(who + "subscription needs exactly one predecessor");
        break;
      default:
        if (t.preds.empty()) errors.push_back(who + "fusion task needs at least one predecessor");
        break;
    }
    std::set<std::string> seen;
    for (const auto& p : t.preds) {
      if (!index.count(p)) errors.push_back(who + "unknown predecessor '" + p + "'");
      if (!seen.insert(p).second) errors.push_back(who + "duplicate edge from '" + p + "'");
      if (p == t.id) errors.push_back(who + "self loop");
    }
    if (t.deadline && *t.deadline < t.wcet) errors.push_back(who + "deadline shorter than wcet");
  }
  if (n > 0 && !has_sensor) errors.push_back("DAG has no sensor task");
  if (!errors.empty()) return result;

  TaskGraph g;
  try {
    g = build_graph(input);
  } catch (const InputError& e) {
    errors.push_back(e.what());
    return result;
  }

  const auto& mc = input.metrics;
  if (mc.objective.empty()) errors.push_back("metric objective is empty");
  for (const auto& w : mc.objective) {
    if (!(w.weight >= 0.0)) errors.push_back("metric weights must be non-negative");
  }
  for (const auto& s : mc.sinks) {
    auto it = index.find(s);
    if (it == index.end()) {
      errors.push_back("metric sink '" + s + "' does not exist");
    } else if (!g.is_sink(it->second)) {
      errors.push_back("metric sink '" + s + "' has successors");
    }
  }
  for (const auto& s : mc.wcrt_sensors) {
    auto it = index.find(s);
    if (it == index.end() || input.tasks[it->second].type != TaskType::Sensor) {
      errors.push_back("WCRT sensor '" + s + "' is not a sensor task");
    }
  }
  if (!errors.empty()) return result;

  DagSpec out = input;
  for (auto& t : out.tasks) {
    if (!t.deadline) t.deadline = is_timer(t.type) ? t.period : max_timer_period;
    if (*t.deadline < t.wcet) errors.push_back("task '" + t.id + "': default deadline shorter than wcet");
  }
  if (!errors.empty()) return result;
  result.dag = std::move(out);
  return result;
}

DagSpec validated(const DagSpec& dag) {
  auto r = validate(dag);
  if (!r.ok()) {
    std::ostringstream msg;
    msg << "invalid DAG:";
    for (const auto& e : r.errors) msg << "\n  " << e;
    throw InputError(msg.str());
  }
  return std::move(*r.dag);
}

ProducerMap compute_producers(const DagSpec& dag, const TaskGraph& g) {
  const int n = g.size();
  ProducerMap pm;
  pm.producer_of.assign(n, -1);
  pm.pred_producers_of.resize(n);
  for (int i : g.topo) {
    if (is_producer(dag.tasks[i].type)) {
      pm.producer_of[i] = i;
    } else {
      pm.producer_of[i] = pm.producer_of[g.preds[i].front()];
    }
    for (int p : g.preds[i]) pm.pred_producers_of[i].push_back(pm.producer_of[p]);
  }
  return pm;
}

ProducerMap compute_producers(const DagSpec& dag) { return compute_producers(dag, build_graph(dag)); }

DagSpec adjust_branch_successors(const DagSpec& dag) {
  const TaskGraph g = build_graph(dag);
  DagSpec out = dag;
  for (int i = 0; i < g.size(); ++i) {
    auto& t = out.tasks[i];
    if (t.type != TaskType::Subscription || g.preds[i].size() != 1) continue;
    if (g.succs[g.preds[i].front()].size() > 1) t.type = TaskType::IFusion;
  }
  return out;
}

std::vector<int> reachable_sensors(const DagSpec& dag, const TaskGraph& g, int task) {
  std::vector<char> seen(g.size(), 0);
  std::vector<int> stack{task};
  seen[task] = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int p : g.preds[i]) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  std::vector<int> out;
  for (int i = 0; i < g.size(); ++i) {
    if (seen[i] && dag.tasks[i].type == TaskType::Sensor) out.push_back(i);
  }
  return out;
}

std::vector<int> evaluated_sinks(const DagSpec& dag, const TaskGraph& g,
                                 const MetricConfig& metrics) {
  std::vector<int> out;
  if (metrics.sinks.empty()) {
    for (int i = 0; i < g.size(); ++i) {
      if (g.is_sink(i)) out.push_back(i);
    }
    return out;
  }
  for (const auto& id : metrics.sinks) {
    int i = dag.index_of(id);
    if (i < 0 || !g.is_sink(i)) throw InputError("'" + id + "' is not a sink task");
    out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> evaluated_sinks(const DagSpec& dag, const TaskGraph& g) {
  return evaluated_sinks(dag, g, dag.metrics);
}

std::vector<int> wcrt_sensors_for(const DagSpec& dag, const TaskGraph& g, int sink,
                                  const MetricConfig& metrics) {
  const auto reach = reachable_sensors(dag, g, sink);
  if (metrics.wcrt_sensors.empty()) return reach;
  std::vector<int> out;
  for (const auto& id : metrics.wcrt_sensors) {
    int s = dag.index_of(id);
    if (std::find(reach.begin(), reach.end(), s) == reach.end()) {
      throw ModelError("WCRT requested for sensor '" + id + "' with no path to sink '" +
                       dag.tasks[sink].id + "'");
    }
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> wcrt_sensors_for(const DagSpec& dag, const TaskGraph& g, int sink) {
  return wcrt_sensors_for(dag, g, sink, dag.metrics);
}

}  // namespace fusched
