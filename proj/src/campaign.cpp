#include "fusched/campaign.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fusched/gantt.hpp"
#include "fusched/io.hpp"
#include "json.hpp"

namespace fusched {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  if (std::abs(v - std::round(v)) < 1e-6) {
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(std::llround(v)));
  } else {
    std::snprintf(buf, sizeof buf, "%.6f", v);
  }
  return buf;
}

std::string case_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "case_%04d", index);
  return buf;
}

Json gen_json(const GenConfig& g) {
  Json types = Json::array();
  for (TaskType t : g.fusion_types) types.push_back(std::string(to_string(t)));
  return Json{{"node_count", g.node_count},
              {"sensor_count", g.sensor_count},
              {"edge_count", g.edge_count},
              {"fusion_types", types},
              {"core_count", g.core_count},
              {"seed", g.seed},
              {"event_wcet", {g.event_wcet_min, g.event_wcet_max}},
              {"utilization", {g.util_min, g.util_max}},
              {"periods", g.periods}};
}

Json run_json(const CampaignConfig& c) {
  return Json{{"delta_multiplier", c.run.delta_multiplier},
              {"time_limit", c.run.limits.time_limit},
              {"pin_tasks", c.run.ilp.pin_tasks},
              {"cores", c.run.cores ? Json(*c.run.cores) : Json(nullptr)},
              {"metrics_override", c.run.metrics.has_value()}};
}

Json summary_json(const CaseSummary& s) {
  Json j{{"case", s.index}, {"seed", s.seed}, {"status", s.status}};
  j["runtime_s"] = s.runtime ? Json(*s.runtime) : Json(nullptr);
  j["objective"] = s.objective;
  if (s.metrics) {
    Json w = Json::object();
    for (const auto& [k, v] : s.metrics->wcrt) w[k] = v;
    j["metrics"] = Json{{"sink", s.metrics->sink}, {"MRT", s.metrics->mrt},
                        {"MTD", s.metrics->mtd},   {"PAoI", s.metrics->paoi},
                        {"WCRT", w},               {"MS", s.metrics->ms}};
  } else {
    j["metrics"] = nullptr;
  }
  j["checked"] = s.checked;
  j["message"] = s.message;
  return j;
}

CaseSummary summary_from_json(const Json& j) {
  CaseSummary s;
  s.index = j.at("case").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.status = j.at("status").get<std::string>();
  if (!j.at("runtime_s").is_null()) s.runtime = j.at("runtime_s").get<double>();
  s.objective = j.at("objective").get<std::vector<double>>();
  if (!j.at("metrics").is_null()) {
    const Json& m = j.at("metrics");
    SinkMetrics sm;
    sm.sink = m.at("sink").get<std::string>();
    sm.mrt = m.at("MRT").get<Tick>();
    sm.mtd = m.at("MTD").get<Tick>();
    sm.paoi = m.at("PAoI").get<Tick>();
    sm.ms = m.at("MS").get<Tick>();
    for (const auto& [k, v] : m.at("WCRT").items()) sm.wcrt[k] = v.get<Tick>();
    s.metrics = sm;
  }
  s.checked = j.at("checked").get<bool>();
  s.message = j.at("message").get<std::string>();
  return s;
}

}  // namespace

void write_case_artifacts(const fs::path& dir, const DagSpec& dag, const CaseResult& r) {
  write_file(dir / "dag.json", dag_to_json(dag));
  if (!r.schedule) return;
  std::vector<TaskType> types;
  for (const auto& t : r.problem.dag.tasks) types.push_back(t.type);
  const auto trace = schedule_trace(*r.schedule, r.problem);
  write_file(dir / "schedule.json", schedule_to_json(*r.schedule));
  write_file(dir / "metrics.csv", metrics_csv(r.metrics));
  write_file(dir / "trace.tsv", format_trace(trace));
  write_file(dir / "gantt.svg", emit_gantt(*r.schedule, trace, types));
}

CaseSummary run_campaign_case(const CampaignConfig& c, int index, const fs::path& dir) {
  CaseSummary s;
  s.index = index;
  s.seed = c.gen.seed + static_cast<std::uint64_t>(index);
  GenConfig g = c.gen;
  g.seed = s.seed;
  try {
    const DagSpec dag = generate(g);
    const CaseResult r = run_case(dag, c.run);
    s.status = std::string(to_string(r.outcome.status));
    if (!c.reproducible) s.runtime = r.outcome.wall_time;
    s.message = r.outcome.message;
    if (r.schedule) {
      s.objective = r.metrics.levels;
      if (!r.metrics.sinks.empty()) s.metrics = r.metrics.sinks.front();
      const auto mism = epigraph_mismatches(r.metrics, r.epigraph, r.problem.dag.metrics);
      s.checked = r.check.ok() && mism.empty();
      if (!r.check.ok()) s.message = r.check.violations.front();
      if (!mism.empty()) s.message = mism.front();
    }
    if (c.artifacts) write_case_artifacts(dir, dag, r);
  } catch (const InputError& e) {
    s.status = "input-error";
    s.message = e.what();
  } catch (const std::exception& e) {
    s.status = "error";
    s.message = e.what();
  }
  return s;
}

std::string distribution_csv(const std::vector<CaseSummary>& cases) {
  std::ostringstream o;
  o << "case,seed,status,runtime_s,objective,MRT,MTD,PAoI,WCRT,MS\n";
  for (const auto& s : cases) {
    o << s.index << ',' << s.seed << ',' << s.status << ',';
    if (s.runtime) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", *s.runtime);
      o << buf;
    }
    o << ',';
    for (std::size_t k = 0; k < s.objective.size(); ++k) o << (k ? ";" : "") << fmt(s.objective[k]);
    if (s.metrics) {
      Tick wcrt = 0;
      for (const auto& [sensor, v] : s.metrics->wcrt) wcrt = std::max(wcrt, v);
      o << ',' << s.metrics->mrt << ',' << s.metrics->mtd << ',' << s.metrics->paoi << ',' << wcrt
        << ',' << s.metrics->ms;
    } else {
      o << ",,,,,";
    }
    o << '\n';
  }
  return o.str();
}

CampaignResult run_campaign(const CampaignConfig& c) {
  if (c.count < 1) throw InputError("campaign: count must be at least 1");
  if (c.workers < 1) throw InputError("campaign: workers must be at least 1");
  check_config(c.gen);
  const fs::path manifest_path = c.out_dir / "manifest.json";
  Json manifest{{"gen", gen_json(c.gen)}, {"run", run_json(c)}, {"count", c.count}};
  Json cases = Json::array();
  for (int k = 0; k < c.count; ++k) {
    cases.push_back(Json{{"case", k}, {"seed", c.gen.seed + static_cast<std::uint64_t>(k)},
                         {"dir", case_name(k)}});
  }
  manifest["cases"] = cases;
  if (fs::exists(manifest_path)) {
    Json old = Json::parse(read_file(manifest_path));
    if (old != manifest) {
      throw InputError("campaign: " + manifest_path.string() + " describes a different campaign");
    }
  } else {
    write_file(manifest_path, manifest.dump(2) + "\n");
  }

  CampaignResult res;
  res.cases.resize(c.count);
  std::vector<char> done(c.count, 0);
  for (int k = 0; k < c.count; ++k) {
    const fs::path p = c.out_dir / case_name(k) / "summary.json";
    if (!fs::exists(p)) continue;
    try {
      res.cases[k] = summary_from_json(Json::parse(read_file(p)));
      done[k] = 1;
      ++res.resumed;
    } catch (const std::exception&) {
      // Incomplete summary from an interrupted run: solve again.
    }
  }

  auto one = [&](int k) {
    const fs::path dir = c.out_dir / case_name(k);
    CaseSummary s = run_campaign_case(c, k, dir);
    write_file(dir / "summary.json", summary_json(s).dump(2) + "\n");
    res.cases[k] = std::move(s);
  };
  if (c.workers == 1) {
    for (int k = 0; k < c.count; ++k) {
      if (!done[k]) one(k);
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(c.workers)
    for (int k = 0; k < c.count; ++k) {
      if (!done[k]) one(k);
    }
  }

  for (const auto& s : res.cases) res.feasible += s.feasible() ? 1 : 0;
  write_file(c.out_dir / "distribution.csv", distribution_csv(res.cases));
  Json summary{{"cases", c.count},
               {"feasible", res.feasible},
               {"schedulability_ratio", res.schedulability_ratio()},
               {"checked", std::count_if(res.cases.begin(), res.cases.end(),
                                         [](const CaseSummary& s) { return s.checked; })}};
  write_file(c.out_dir / "summary.json", summary.dump(2) + "\n");
  return res;
}

}  // namespace fusched
