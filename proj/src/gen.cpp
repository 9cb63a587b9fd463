#include "fusched/gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fusched/dag.hpp"
#include "fusched/expansion.hpp"

namespace fusched {

namespace {

using Rng = std::mt19937_64;

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

long max_edges(const GenConfig& c) {
  const long n = c.node_count, s = c.sensor_count;
  return n * (n - 1) / 2 - s * (s - 1) / 2;
}

struct Components {
  std::vector<int> parent;
  explicit Components(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

void check_config(const GenConfig& c) {
  const int n = c.node_count;
  if (c.sensor_count < 1) throw InputError("gen: at least one sensor is required");
  if (c.sensor_count >= n) throw InputError("gen: at least one non-sensor task is required");
  if (c.edge_count < n - 1 || c.edge_count > static_cast<long>(n) * (n - 1) / 2) {
    throw InputError("gen: edge count must lie in [" + std::to_string(n - 1) + ", " +
                     std::to_string(static_cast<long>(n) * (n - 1) / 2) + "]");
  }
  if (c.edge_count > max_edges(c)) {
    throw InputError("gen: at most " + std::to_string(max_edges(c)) +
                     " edges fit when sensors are sources");
  }
  if (c.fusion_types.empty()) throw InputError("gen: the set of fusion types is empty");
  for (TaskType t : c.fusion_types) {
    if (!is_fusion(t)) throw InputError("gen: '" + std::string(to_string(t)) + "' is not a fusion type");
  }
  if (c.periods.empty()) throw InputError("gen: the period set is empty");
  for (Tick p : c.periods) {
    if (p < 1) throw InputError("gen: periods must be positive");
  }
  if (c.event_wcet_min < 1 || c.event_wcet_max < c.event_wcet_min) {
    throw InputError("gen: invalid event WCET range");
  }
  if (c.util_min <= 0.0 || c.util_max < c.util_min || c.util_max > 1.0) {
    throw InputError("gen: invalid utilization range");
  }
  if (c.core_count < 1) throw InputError("gen: at least one core is required");
}

DagSpec generate(const GenConfig& c) {
  check_config(c);
  Rng rng(c.seed);
  const int n = c.node_count;
  const int s = c.sensor_count;
  std::vector<std::vector<int>> preds(n);
  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  Components comp(n);
  auto add = [&](int a, int b) {
    preds[b].push_back(a);
    has[a][b] = 1;
    comp.join(a, b);
  };

  for (int b = s; b < n; ++b) add(std::uniform_int_distribution<int>(0, b - 1)(rng), b);
  // Merge the trees rooted at different sensors.
  for (;;) {
    std::vector<int> roots;
    for (int x = 0; x < n; ++x) {
      if (comp.find(x) == x) roots.push_back(x);
    }
    if (roots.size() <= 1) break;
    const int sensor = [&] {
      for (int x = 0; x < s; ++x) {
        if (comp.find(x) == roots[0]) return x;
      }
      return 0;
    }();
    std::vector<int> targets;
    for (int b = s; b < n; ++b) {
      if (comp.find(b) != comp.find(sensor)) targets.push_back(b);
    }
    add(sensor, pick(rng, targets));
  }
  std::vector<std::pair<int, int>> free;
  for (int b = s; b < n; ++b) {
    for (int a = 0; a < b; ++a) {
      if (!has[a][b]) free.emplace_back(a, b);
    }
  }
  std::shuffle(free.begin(), free.end(), rng);
  for (int k = 0; k < c.edge_count - (n - 1); ++k) add(free[k].first, free[k].second);

  DagSpec d;
  d.core_count = c.core_count;
  std::uniform_real_distribution<double> util(c.util_min, c.util_max);
  std::uniform_int_distribution<Tick> event_wcet(c.event_wcet_min, c.event_wcet_max);
  auto timer = [&](TaskSpec& t) {
    t.period = pick(rng, c.periods);
    t.wcet = std::max<Tick>(1, std::llround(util(rng) * static_cast<double>(t.period)));
  };
  for (int i = 0; i < n; ++i) {
    TaskSpec t;
    t.id = "t" + std::to_string(i + 1);
    std::sort(preds[i].begin(), preds[i].end());
    for (int p : preds[i]) t.preds.push_back("t" + std::to_string(p + 1));
    if (i < s) {
      t.type = TaskType::Sensor;
      timer(t);
    } else if (preds[i].size() == 1) {
      t.type = TaskType::Subscription;
      t.wcet = event_wcet(rng);
    } else {
      t.type = pick(rng, c.fusion_types);
      if (t.type == TaskType::TFusion) {
        timer(t);
      } else {
        t.wcet = event_wcet(rng);
      }
    }
    d.tasks.push_back(std::move(t));
  }
  d = adjust_branch_successors(d);

  const TaskGraph g = build_graph(d);
  const int sink = n - 1;
  d.metrics.sinks = {d.tasks[sink].id};
  d.metrics.wcrt_sensors = {d.tasks[reachable_sensors(d, g, sink).front()].id};
  return d;
}

DagSpec generate_tiny(std::uint64_t seed, int max_instances) {
  Rng rng(seed);
  for (;;) {
    GenConfig c;
    c.node_count = std::uniform_int_distribution<int>(2, 4)(rng);
    c.sensor_count = std::uniform_int_distribution<int>(1, std::min(2, c.node_count - 1))(rng);
    c.edge_count = std::uniform_int_distribution<int>(
        c.node_count - 1, static_cast<int>(max_edges(c)))(rng);
    c.fusion_types = {TaskType::TFusion, TaskType::WFusion, TaskType::IFusion};
    c.core_count = std::uniform_int_distribution<int>(1, 2)(rng);
    c.seed = rng();
    c.event_wcet_max = 6;
    c.util_min = 0.1;
    c.util_max = 0.6;
    c.periods = {10, 20};
    DagSpec d = generate(c);

    MetricConfig& m = d.metrics;
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
      m.objective.clear();
      for (Metric x : kAllMetrics) {
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
        m.objective.push_back({x, static_cast<double>(std::uniform_int_distribution<int>(1, 2)(rng)),
                               std::uniform_int_distribution<int>(1, 2)(rng)});
      }
      if (m.objective.empty()) m.objective = MetricConfig::default_objective();
    }
    try {
      if (make_problem(d).table.total_instances() <= max_instances) return d;
    } catch (const ModelError&) {
    }
  }
}

}  // namespace fusched
