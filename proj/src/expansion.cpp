#include "fusched/expansion.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fusched {

Tick hyperperiod(const DagSpec& dag) {
  Tick hp = 0;
  for (const auto& t : dag.tasks) {
    if (!is_timer(t.type)) continue;
    if (t.period < 1) throw InputError("task '" + t.id + "' has no positive period");
    hp = hp == 0 ? t.period : std::lcm(hp, t.period);
  }
  if (hp == 0) throw InputError("DAG has no timer-triggered task");
  return hp;
}

int n_ins(const DagSpec& dag, const TaskGraph& g, int task, Tick window,
          const std::vector<int>& counts) {
  const auto& t = dag.tasks[task];
  if (is_timer(t.type)) return static_cast<int>(window / t.period);

  std::vector<int> pc;
  for (int p : g.preds[task]) {
    if (counts[p] < 0) {
      throw ModelError("instance count of '" + t.id + "' requested before predecessor '" +
                       dag.tasks[p].id + "'");
    }
    pc.push_back(counts[p]);
  }
  switch (t.type) {
    case TaskType::WFusion:
      return *std::min_element(pc.begin(), pc.end());
    case TaskType::IFusion:
      return std::accumulate(pc.begin(), pc.end(), 0) - (static_cast<int>(pc.size()) - 1);
    default:
      return pc.front();
  }
}

std::vector<int> instance_counts(const DagSpec& dag, const TaskGraph& g, Tick window) {
  std::vector<int> counts(g.size(), -1);
  for (int i : g.topo) counts[i] = std::max(0, n_ins(dag, g, i, window, counts));
  return counts;
}

int InstanceTable::phase(int task, int j) const {
  for (int p = 1; p <= k; ++p) {
    if (j <= counts[task][p]) return p;
  }
  return k;
}

int InstanceTable::total_instances() const { return std::accumulate(n.begin(), n.end(), 0); }

InstanceTable build_instance_table(const DagSpec& dag, const TaskGraph& g, int k) {
  if (k < 3) throw InputError("delta multiplier must be at least 3");
  InstanceTable t;
  t.hp = hyperperiod(dag);
  t.k = k;
  t.delta = t.hp * k;
  const int n = g.size();
  t.counts.assign(n, std::vector<int>(k + 1, 0));
  for (int p = 1; p <= k; ++p) {
    auto c = instance_counts(dag, g, t.hp * p);
    for (int i = 0; i < n; ++i) t.counts[i][p] = c[i];
  }
  t.n.resize(n);
  t.steady.resize(n);
  t.releases.resize(n);
  for (int i = 0; i < n; ++i) {
    t.n[i] = t.counts[i][k];
    t.steady[i] = t.counts[i][2] - t.counts[i][1];
    for (int p = 2; p <= k; ++p) {
      if (t.counts[i][p] - t.counts[i][p - 1] != t.steady[i]) {
        throw ModelError("task '" + dag.tasks[i].id +
                         "' has no steady per-hyperperiod instance count");
      }
      if (t.counts[i][p] < t.counts[i][p - 1]) {
        throw ModelError("instance counts of '" + dag.tasks[i].id + "' are not monotone");
      }
    }
    if (t.n[i] < 1) throw ModelError("task '" + dag.tasks[i].id + "' has no instance");
    const auto& task = dag.tasks[i];
    if (is_timer(task.type)) {
      for (int j = 1; j <= t.n[i]; ++j) t.releases[i].push_back(task.period * (j - 1));
    }
  }
  return t;
}

InstanceTable build_instance_table(const DagSpec& dag, int k) {
  return build_instance_table(dag, build_graph(dag), k);
}

std::string format_instance_table(const DagSpec& dag, const InstanceTable& table) {
  std::ostringstream out;
  out << "# hp=" << table.hp << " delta=" << table.delta << "\n";
  out << "task\tindex\tphase\trelease\n";
  for (std::size_t i = 0; i < dag.tasks.size(); ++i) {
    for (int j = 1; j <= table.n[i]; ++j) {
      out << dag.tasks[i].id << '\t' << j << '\t' << table.phase(static_cast<int>(i), j) << '\t';
      if (!table.releases[i].empty()) {
        out << table.releases[i][j - 1];
      } else {
        out << '-';
      }
      out << '\n';
    }
  }
  return out.str();
}

Problem make_problem(const DagSpec& input, int k) {
  Problem p;
  p.dag = validated(adjust_branch_successors(validated(input)));
  p.graph = build_graph(p.dag);
  p.producers = compute_producers(p.dag, p.graph);
  p.table = build_instance_table(p.dag, p.graph, k);
  p.sinks = evaluated_sinks(p.dag, p.graph);
  for (int s : p.sinks) (void)wcrt_sensors_for(p.dag, p.graph, s);
  return p;
}

}  // namespace fusched
