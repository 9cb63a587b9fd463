#pragma once

#include <string>
#include <vector>

#include "fusched/dag.hpp"
#include "fusched/types.hpp"

namespace fusched {

/// LCM of all sensor and t-fusion periods. Throws InputError when there is none.
Tick hyperperiod(const DagSpec& dag);

/// Instance count of one task over `window`, given the counts of every
/// predecessor over the same window (entries of -1 mean "not yet computed").
int n_ins(const DagSpec& dag, const TaskGraph& graph, int task, Tick window,
          const std::vector<int>& counts);

/// Counts of all tasks over `window`, computed in topological order.
std::vector<int> instance_counts(const DagSpec& dag, const TaskGraph& graph, Tick window);

struct InstanceTable {
  Tick hp = 0;
  Tick delta = 0;
  int k = 3;                                   ///< delta = k * hp
  std::vector<std::vector<int>> counts;        ///< counts[i][p] = n-ins(i, p*hp), p = 0..k
  std::vector<int> n;                          ///< counts over delta
  std::vector<int> steady;                     ///< instances per hyperperiod from phase 2 on
  std::vector<std::vector<Tick>> releases;     ///< static releases of timer tasks, empty otherwise

  int count(int task) const { return n[task]; }
  /// Phase (1-based) of instance j (1-based).
  int phase(int task, int j) const;
  /// First and last instance index of a phase.
  int first_in_phase(int task, int p) const { return counts[task][p - 1] + 1; }
  int last_in_phase(int task, int p) const { return counts[task][p]; }
  int total_instances() const;
};

/// Throws ModelError if the per-hyperperiod count is not constant from phase 2 on.
InstanceTable build_instance_table(const DagSpec& dag, const TaskGraph& graph, int k = 3);
InstanceTable build_instance_table(const DagSpec& dag, int k = 3);

/// One row per instance: task, index, phase, release (timer tasks only).
std::string format_instance_table(const DagSpec& dag, const InstanceTable& table);

/// A validated, branch-adjusted DAG together with everything derived from it.
struct Problem {
  DagSpec dag;
  TaskGraph graph;
  ProducerMap producers;
  InstanceTable table;
  std::vector<int> sinks;  ///< evaluated sinks

  int task_count() const { return graph.size(); }
  const TaskSpec& task(int i) const { return dag.tasks[i]; }
  Tick deadline(int i) const { return *dag.tasks[i].deadline; }
};

/// validate -> adjust_branch_successors -> validate -> build_instance_table.
Problem make_problem(const DagSpec& dag, int k = 3);

}  // namespace fusched
