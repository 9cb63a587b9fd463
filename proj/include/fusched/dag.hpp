#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fusched/types.hpp"

namespace fusched {

/// Index-based adjacency of a DAG whose pred ids all resolve.
struct TaskGraph {
  std::vector<std::vector<int>> preds;  ///< per task, in edge order
  std::vector<std::vector<int>> succs;
  std::vector<int> topo;                ///< stable: ties broken by input order

  int size() const { return static_cast<int>(preds.size()); }
  bool is_sink(int i) const { return succs[i].empty(); }
};

/// Builds adjacency and a topological order. Throws InputError on dangling ids or cycles.
TaskGraph build_graph(const DagSpec& dag);

struct ValidationResult {
  std::optional<DagSpec> dag;        ///< normalized copy when valid
  std::vector<std::string> errors;

  bool ok() const { return dag.has_value(); }
};

/// Checks every structural invariant and fills unset deadlines
/// (timer tasks: their period; event tasks: the largest timer period).
ValidationResult validate(const DagSpec& dag);

/// Like validate(), but throws InputError listing all problems.
DagSpec validated(const DagSpec& dag);

struct ProducerMap {
  std::vector<int> producer_of;
  std::vector<std::vector<int>> pred_producers_of;  ///< one entry per incoming edge
};

ProducerMap compute_producers(const DagSpec& dag, const TaskGraph& graph);
ProducerMap compute_producers(const DagSpec& dag);

/// Subscriptions fed by a node with several successors become single-input
/// I-fusion tasks so every branch gets its own instance index. Idempotent.
DagSpec adjust_branch_successors(const DagSpec& dag);

/// Sensors (by index) with a directed path to `task`.
std::vector<int> reachable_sensors(const DagSpec& dag, const TaskGraph& graph, int task);

/// Sinks named by the metric config, or every sink, in index order.
std::vector<int> evaluated_sinks(const DagSpec& dag, const TaskGraph& graph,
                                 const MetricConfig& metrics);
std::vector<int> evaluated_sinks(const DagSpec& dag, const TaskGraph& graph);

/// Sensors whose WCRT toward `sink` is evaluated. Throws ModelError for a
/// named sensor without a path to the sink.
std::vector<int> wcrt_sensors_for(const DagSpec& dag, const TaskGraph& graph, int sink,
                                  const MetricConfig& metrics);
std::vector<int> wcrt_sensors_for(const DagSpec& dag, const TaskGraph& graph, int sink);

}  // namespace fusched
