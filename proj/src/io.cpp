#include "fusched/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fusched {

using Json = nlohmann::ordered_json;

namespace {

void only_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw InputError(what + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw InputError("unknown key '" + k + "' in " + what);
  }
}

template <class T>
T get(const Json& j, const std::string& key, const std::string& what) {
  if (!j.contains(key)) throw InputError(what + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(what + ": wrong type for '" + key + "'");
  }
}

Tick get_tick(const Json& j, const std::string& key, const std::string& what) {
  if (!j.contains(key)) throw InputError(what + ": missing '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw InputError(what + ": '" + key + "' must be an integer");
  return v.get<Tick>();
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string dag_to_json(const DagSpec& dag) {
  Json j;
  j["core_count"] = dag.core_count;
  Json tasks = Json::array();
  for (const auto& t : dag.tasks) {
    Json o;
    o["id"] = t.id;
    o["type"] = std::string(to_string(t.type));
    o["wcet"] = t.wcet;
    o["period"] = t.period;
    if (t.deadline) o["deadline"] = *t.deadline;
    o["preds"] = t.preds;
    tasks.push_back(std::move(o));
  }
  j["tasks"] = std::move(tasks);
  Json m;
  Json obj = Json::array();
  for (const auto& w : dag.metrics.objective) {
    obj.push_back({{"metric", std::string(to_string(w.metric))},
                   {"weight", w.weight},
                   {"priority", w.priority}});
  }
  m["objective"] = std::move(obj);
  m["sinks"] = dag.metrics.sinks;
  m["wcrt_sensors"] = dag.metrics.wcrt_sensors;
  j["metrics"] = std::move(m);
  return j.dump(2) + "\n";
}

DagSpec dag_from_json(const std::string& text) {
  const Json j = parse(text);
  only_keys(j, {"core_count", "tasks", "metrics"}, "DAG document");
  DagSpec dag;
  if (j.contains("core_count")) {
    const auto& c = j.at("core_count");
    if (!c.is_number_integer()) throw InputError("core_count must be an integer");
    dag.core_count = c.get<int>();
  }
  if (!j.contains("tasks") || !j.at("tasks").is_array()) throw InputError("'tasks' must be an array");
  for (const auto& o : j.at("tasks")) {
    only_keys(o, {"id", "type", "wcet", "period", "deadline", "preds"}, "task");
    TaskSpec t;
    t.id = get<std::string>(o, "id", "task");
    const std::string what = "task " + t.id;
    const auto type = parse_task_type(get<std::string>(o, "type", what));
    if (!type) throw InputError(what + ": unknown type '" + o.at("type").get<std::string>() + "'");
    t.type = *type;
    t.wcet = get_tick(o, "wcet", what);
    t.period = o.contains("period") ? get_tick(o, "period", what) : 0;
    if (o.contains("deadline") && !o.at("deadline").is_null()) t.deadline = get_tick(o, "deadline", what);
    if (o.contains("preds")) t.preds = get<std::vector<std::string>>(o, "preds", what);
    dag.tasks.push_back(std::move(t));
  }
  if (j.contains("metrics")) {
    const auto& m = j.at("metrics");
    only_keys(m, {"objective", "sinks", "wcrt_sensors"}, "metrics");
    if (m.contains("objective")) {
      dag.metrics.objective.clear();
      if (!m.at("objective").is_array()) throw InputError("metrics.objective must be an array");
      for (const auto& w : m.at("objective")) {
        only_keys(w, {"metric", "weight", "priority"}, "objective term");
        MetricWeight mw;
        const auto name = get<std::string>(w, "metric", "objective term");
        const auto metric = parse_metric(name);
        if (!metric) throw InputError("unknown metric '" + name + "'");
        mw.metric = *metric;
        if (w.contains("weight")) mw.weight = get<double>(w, "weight", "objective term");
        if (w.contains("priority")) mw.priority = get<int>(w, "priority", "objective term");
        dag.metrics.objective.push_back(mw);
      }
    }
    if (m.contains("sinks")) dag.metrics.sinks = get<std::vector<std::string>>(m, "sinks", "metrics");
    if (m.contains("wcrt_sensors")) {
      dag.metrics.wcrt_sensors = get<std::vector<std::string>>(m, "wcrt_sensors", "metrics");
    }
  }
  return dag;
}

std::string schedule_to_json(const Schedule& s) {
  Json j;
  j["hp"] = s.hp;
  j["delta"] = s.delta;
  j["core_count"] = s.core_count;
  Json tasks = Json::array();
  for (std::size_t i = 0; i < s.inst.size(); ++i) {
    Json t;
    t["id"] = s.task_ids[i];
    Json list = Json::array();
    for (const auto& a : s.inst[i]) {
      Json o;
      o["start"] = a.start;
      o["finish"] = a.finish;
      o["core"] = a.core;
      o["phase"] = a.phase;
      if (!a.used.empty()) o["used"] = a.used;
      list.push_back(std::move(o));
    }
    t["instances"] = std::move(list);
    tasks.push_back(std::move(t));
  }
  j["tasks"] = std::move(tasks);
  return j.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
  const Json j = parse(text);
  only_keys(j, {"hp", "delta", "core_count", "tasks"}, "schedule document");
  Schedule s;
  s.hp = get_tick(j, "hp", "schedule");
  s.delta = get_tick(j, "delta", "schedule");
  s.core_count = get<int>(j, "core_count", "schedule");
  if (!j.contains("tasks") || !j.at("tasks").is_array()) throw InputError("'tasks' must be an array");
  for (const auto& t : j.at("tasks")) {
    only_keys(t, {"id", "instances"}, "schedule task");
    s.task_ids.push_back(get<std::string>(t, "id", "schedule task"));
    std::vector<ScheduledInstance> list;
    for (const auto& o : t.at("instances")) {
      only_keys(o, {"start", "finish", "core", "phase", "used"}, "instance");
      ScheduledInstance a;
      a.start = get_tick(o, "start", "instance");
      a.finish = get_tick(o, "finish", "instance");
      a.core = get<int>(o, "core", "instance");
      a.phase = get<int>(o, "phase", "instance");
      if (o.contains("used")) a.used = get<std::vector<int>>(o, "used", "instance");
      list.push_back(std::move(a));
    }
    s.inst.push_back(std::move(list));
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

DagSpec load_dag(const std::filesystem::path& path) { return dag_from_json(read_file(path)); }

}  // namespace fusched
