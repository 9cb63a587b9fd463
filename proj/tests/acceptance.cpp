// Acceptance run: one PASS/FAIL line per criterion, details indented above it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "fusched/brute_force.hpp"
#include "fusched/campaign.hpp"
#include "fusched/gen.hpp"
#include "fusched/io.hpp"
#include "fusched/pipeline.hpp"
#include "fusched/presets.hpp"

using namespace fusched;
namespace fs = std::filesystem;

namespace {

struct Expected {
  std::string preset;
  Tick mrt, mtd, paoi, wcrt;
  std::optional<Tick> ms;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_levels(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > 1e-6 * std::max(1.0, std::abs(b[k]))) return false;
  }
  return true;
}

std::string levels_str(const std::vector<double>& v) {
  std::ostringstream o;
  for (std::size_t k = 0; k < v.size(); ++k) o << (k ? "/" : "") << v[k];
  return o.str();
}

Tick max_wcrt(const SinkMetrics& m) {
  Tick w = 0;
  for (const auto& [s, v] : m.wcrt) w = std::max(w, v);
  return w;
}

std::string split(const SinkMetrics& m) {
  std::ostringstream o;
  o << "MRT " << m.mrt << ", MTD " << m.mtd << ", PAoI " << m.paoi << ", WCRT " << max_wcrt(m)
    << ", MS " << m.ms;
  return o.str();
}

class Runner {
 public:
  explicit Runner(double time_limit) : time_limit_(time_limit) {}

  /// Solves a preset once per process; later criteria reuse the result.
  const CaseResult& preset(const std::string& name) {
    if (auto it = cache_.find(name); it != cache_.end()) return it->second;
    RunOptions o;
    o.limits.time_limit = time_limit_;
    const auto t0 = std::chrono::steady_clock::now();
    auto [it, _] = cache_.emplace(name, run_case(make_preset(name), o));
    runtime_[name] = seconds_since(t0);
    return it->second;
  }
  double runtime(const std::string& name) const { return runtime_.at(name); }
  double time_limit() const { return time_limit_; }

 private:
  double time_limit_;
  std::map<std::string, CaseResult> cache_;
  std::map<std::string, double> runtime_;
};

void verdict(int k, bool pass, const std::string& what) {
  std::cout << "criterion " << k << ": " << (pass ? "PASS" : "FAIL") << "  " << what << std::endl;
}

void detail(const std::string& line) { std::cout << "  " << line << std::endl; }

/// Violations of the property suite for one solved case; empty when it holds.
/// Replay reads the newest input at every start, so it can differ from a schedule
/// whose decoded inputs are older (validation warnings); such cases go to `notes`.
std::vector<std::string> properties(const DagSpec& dag, const CaseResult& r, double time_limit,
                                    std::vector<std::string>& notes) {
  std::vector<std::string> bad;
  if (!r.schedule) return {"no schedule"};
  for (const auto& v : r.check.violations) bad.push_back("violation: " + v);
  for (const auto& m : epigraph_mismatches(r.metrics, r.epigraph, r.problem.dag.metrics)) {
    bad.push_back("epigraph: " + m);
  }
  const MetricConfig& mc = r.problem.dag.metrics;
  const MetricsReport base = replay(*r.schedule, r.problem, mc, 2).metrics;
  for (int n : {3, 5}) {
    if (!(replay(*r.schedule, r.problem, mc, n).metrics == base)) {
      bad.push_back("replay over " + std::to_string(n) + " hyperperiods differs from 2");
    }
  }
  if (!(base.sinks == r.metrics.sinks)) {
    if (r.check.warnings.empty()) {
      bad.push_back("replay metrics differ from the schedule's although every input is the newest");
    } else {
      notes.push_back("replay metrics differ from the schedule's; " +
                      std::to_string(r.check.warnings.size()) + " fusion inputs are not the newest");
    }
  }
  RunOptions o;
  o.limits.time_limit = time_limit;
  o.ilp.big_m_factor = 2.0;
  const CaseResult doubled = run_case(dag, o);
  if (doubled.outcome.status != r.outcome.status ||
      !same_levels(doubled.outcome.objective, r.outcome.objective)) {
    bad.push_back("big-M x2: " + std::string(to_string(doubled.outcome.status)) + " " +
                  levels_str(doubled.outcome.objective) + " vs " + levels_str(r.outcome.objective));
  }
  return bad;
}

bool criterion1(Runner& run) {
  const std::vector<Expected> table = {{"fusion-two-chains:WS", 510, 0, 360, 150, {}},
                                       {"fusion-two-chains:WT", 990, 0, 120, 150, {}},
                                       {"fusion-two-chains:TS", 990, 0, 60, 150, {}},
                                       {"fusion-two-chains:TT", 1110, 0, 60, 150, {}},
                                       {"fusion-two-chains:NH", 1250, 120, 40, 250, {}}};
  bool pass = true;
  for (const auto& e : table) {
    const CaseResult& r = run.preset(e.preset);
    const double t = run.runtime(e.preset);
    if (!r.schedule) {
      detail(e.preset + ": " + std::string(to_string(r.outcome.status)));
      pass = false;
      continue;
    }
    const SinkMetrics& m = r.metrics.sinks.front();
    const bool exact = m.mrt == e.mrt && m.mtd == e.mtd && m.paoi == e.paoi && max_wcrt(m) == e.wcrt;
    const double blended = static_cast<double>(e.mrt + e.mtd + e.paoi + e.wcrt);
    std::ostringstream o;
    o << e.preset << ": " << split(m) << ", " << to_string(r.outcome.status) << " in " << t << " s";
    if (!exact) {
      o << "; expected MRT " << e.mrt << ", MTD " << e.mtd << ", PAoI " << e.paoi << ", WCRT "
        << e.wcrt << "; blended " << r.outcome.objective.front() << " vs " << blended;
    }
    detail(o.str());
    if (t > 300.0) detail(e.preset + ": slower than 5 minutes");
    pass = pass && exact && r.outcome.status == SolveStatus::Optimal && t <= 300.0;
    if (exact || !same_levels({r.outcome.objective.front()}, {blended})) continue;

    // Equal blended objective with another split: is the expected split one of the optima?
    MetricConfig mc = r.problem.dag.metrics;
    for (auto& w : mc.objective) w.priority = 2;
    const std::pair<Metric, Tick> ours[] = {
        {Metric::MRT, m.mrt}, {Metric::MTD, m.mtd}, {Metric::PAoI, m.paoi}, {Metric::WCRT, max_wcrt(m)}};
    const Tick expected[] = {e.mrt, e.mtd, e.paoi, e.wcrt};
    for (int k = 0; k < 4; ++k) {
      if (expected[k] >= ours[k].second) continue;
      mc.objective.push_back({ours[k].first, 1.0, 1});
      RunOptions o2;
      o2.limits.time_limit = run.time_limit();
      o2.metrics = mc;
      const CaseResult tb = run_case(make_preset(e.preset), o2);
      if (tb.schedule) {
        const SinkMetrics& q = tb.metrics.sinks.front();
        const bool hit = q.mrt == e.mrt && q.mtd == e.mtd && q.paoi == e.paoi && max_wcrt(q) == e.wcrt;
        detail(e.preset + ": with a " + std::string(to_string(ours[k].first)) +
               " tie-break below the blended level: " + split(q) +
               (hit ? " (expected split is an equal-objective optimum)" : ""));
      }
      break;
    }
  }
  verdict(1, pass, "fusion-system presets match the expected MRT/MTD/PAoI/WCRT");
  return pass;
}

bool criterion2(Runner& run) {
  bool pass = true;
  for (int m = 1; m <= 10; ++m) {
    const std::string name = "navigation:m=" + std::to_string(m);
    const CaseResult& r = run.preset(name);
    if (!r.schedule) {
      detail(name + ": " + std::string(to_string(r.outcome.status)));
      pass = false;
      continue;
    }
    const SinkMetrics& s = r.metrics.sinks.front();
    const Tick step = 5 * (m - 1);
    const bool exact = s.mrt == 155 + step && s.mtd == 0 && s.paoi == 100 && s.ms == 255 + step &&
                       max_wcrt(s) == 55 + step;
    const ReplayResult rp = replay(*r.schedule, r.problem, r.problem.dag.metrics, 100);
    const bool replay_ok = rp.metrics.sinks.front().mrt == s.mrt;
    std::ostringstream o;
    o << name << ": " << split(s) << ", " << to_string(r.outcome.status) << " in "
      << run.runtime(name) << " s, replay(100) MRT " << rp.metrics.sinks.front().mrt;
    detail(o.str());
    pass = pass && exact && replay_ok;
  }
  verdict(2, pass, "navigation presets m=1..10 match, replay over 100 hyperperiods agrees");
  return pass;
}

bool criterion3() {
  const Problem p = make_problem(make_preset("instance-count-example"));
  const std::vector<int> expected = {6, 3, 4, 2, 6, 3, 3, 5, 3, 3, 3};
  std::vector<int> got;
  for (int i = 0; i < p.task_count(); ++i) got.push_back(p.table.counts[i][1]);
  std::ostringstream o;
  o << "hyperperiod " << p.table.hp << ", counts";
  for (int c : got) o << ' ' << c;
  detail(o.str());
  const bool pass = p.table.hp == 60 && got == expected;
  verdict(3, pass, "worked instance-count example over one hyperperiod");
  return pass;
}

bool criterion4(Runner& run, double oracle_limit) {
  struct Row {
    std::string preset;
    Tick mrt, mtd;
  };
  const Row rows[] = {{"two-sensor:1:i-fus", 9, 6},
                      {"two-sensor:1:w-fus", 12, 2},
                      {"two-sensor:2:i-fus", 6, 3},
                      {"two-sensor:2:w-fus", 8, 1}};
  bool pass = true;
  for (const auto& row : rows) {
    const CaseResult& r = run.preset(row.preset);
    if (!r.schedule) {
      detail(row.preset + ": " + std::string(to_string(r.outcome.status)));
      pass = false;
      continue;
    }
    const SinkMetrics& s = r.metrics.sinks.front();
    BruteLimits lim;
    lim.max_instances = 200;
    lim.max_delta = 1000;
    lim.time_limit = oracle_limit;
    const BruteResult b = brute_force_solve(r.problem, r.problem.dag.metrics, lim);
    const bool exact = s.mrt == row.mrt && s.mtd == row.mtd;
    const bool oracle_exact = b.schedule && b.metrics.sinks.front().mrt == row.mrt &&
                              b.metrics.sinks.front().mtd == row.mtd;
    const bool agree = b.outcome.status == SolveStatus::Optimal &&
                       same_levels(b.outcome.objective, r.outcome.objective);
    std::ostringstream o;
    o << row.preset << ": ILP MRT " << s.mrt << ", MTD " << s.mtd << " (" << to_string(r.outcome.status)
      << "); oracle " << to_string(b.outcome.status);
    if (b.schedule) o << " MRT " << b.metrics.sinks.front().mrt << ", MTD " << b.metrics.sinks.front().mtd;
    o << " after " << b.nodes << " nodes, " << b.outcome.wall_time << " s";
    detail(o.str());
    pass = pass && exact && oracle_exact && agree;
  }
  verdict(4, pass, "I-fusion vs W-fusion table, reproduced by ILP and exhaustive search");
  return pass;
}

bool criterion5(Runner& run) {
  const Expected rows[] = {{"branch:A", 37, 0, 20, 0, {}}, {"branch:B", 60, 5, 17, 0, {}}};
  bool pass = true;
  for (const auto& e : rows) {
    const CaseResult& r = run.preset(e.preset);
    if (!r.schedule) {
      detail(e.preset + ": " + std::string(to_string(r.outcome.status)));
      pass = false;
      continue;
    }
    const SinkMetrics& s = r.metrics.sinks.front();
    const bool exact = s.mrt == e.mrt && s.mtd == e.mtd && s.paoi == e.paoi;
    std::ostringstream o;
    o << e.preset << ": MRT " << s.mrt << ", MTD " << s.mtd << ", PAoI " << s.paoi << ", "
      << to_string(r.outcome.status);
    if (!exact) o << "; expected " << e.mrt << "/" << e.mtd << "/" << e.paoi;
    detail(o.str());
    pass = pass && exact;
  }
  verdict(5, pass, "branch case configurations A and B");
  return pass;
}

bool criterion6(int count, double time_limit) {
  int agree = 0, infeasible = 0;
  std::vector<std::string> bad;
  for (int k = 0; k < count; ++k) {
    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(k);
    const DagSpec dag = generate_tiny(seed);
    RunOptions o;
    o.limits.time_limit = time_limit;
    const CaseResult r = run_case(dag, o);
    BruteLimits lim;
    lim.time_limit = time_limit;
    const BruteResult b = brute_force_solve(r.problem, r.problem.dag.metrics, lim);
    const bool ilp_feasible = has_solution(r.outcome.status);
    const bool oracle_feasible = has_solution(b.outcome.status);
    bool ok = r.outcome.status != SolveStatus::Error && b.outcome.status != SolveStatus::Error &&
              r.outcome.status != SolveStatus::Timeout && b.outcome.status != SolveStatus::Timeout &&
              ilp_feasible == oracle_feasible;
    if (ok && ilp_feasible) {
      ok = r.outcome.status == SolveStatus::Optimal && b.outcome.status == SolveStatus::Optimal &&
           same_levels(r.outcome.objective, b.outcome.objective) && r.check.ok();
    }
    if (!ilp_feasible && ok) ++infeasible;
    if (ok) {
      ++agree;
    } else {
      bad.push_back("seed " + std::to_string(seed) + ": ILP " + std::string(to_string(r.outcome.status)) +
                    " " + levels_str(r.outcome.objective) + ", oracle " +
                    std::string(to_string(b.outcome.status)) + " " + levels_str(b.outcome.objective));
    }
  }
  for (const auto& line : bad) detail(line);
  std::ostringstream o;
  o << agree << "/" << count << " tiny DAGs agree (" << infeasible << " infeasible by both)";
  detail(o.str());
  const bool pass = bad.empty();
  verdict(6, pass, "ILP and exhaustive search agree on feasibility and optimal objective");
  return pass;
}

bool criterion7(Runner& run) {
  bool pass = true;
  int checked = 0;
  std::vector<std::string> names = {"fusion-two-chains:WS", "fusion-two-chains:WT",
                                    "fusion-two-chains:TS", "fusion-two-chains:TT",
                                    "fusion-two-chains:NH", "branch:A", "branch:B"};
  for (int m = 1; m <= 10; ++m) names.push_back("navigation:m=" + std::to_string(m));
  for (const char* t : {"two-sensor:1:i-fus", "two-sensor:1:w-fus", "two-sensor:2:i-fus", "two-sensor:2:w-fus"}) {
    names.push_back(t);
  }
  for (const auto& name : names) {
    const CaseResult& r = run.preset(name);
    if (!r.schedule) continue;
    std::vector<std::string> notes;
    const auto bad = properties(make_preset(name), r, run.time_limit(), notes);
    ++checked;
    for (const auto& b : bad) detail(name + ": " + b);
    for (const auto& n : notes) detail(name + ": note: " + n);
    pass = pass && bad.empty();
  }
  detail(std::to_string(checked) + " preset schedules checked");
  pass = pass && checked > 0;
  verdict(7, pass, "validation, solver values, replay invariance and big-M doubling");
  return pass;
}

bool criterion8(const fs::path& dir, double time_limit) {
  CampaignConfig c;
  c.gen.node_count = 6;
  c.gen.sensor_count = 3;
  c.gen.edge_count = 7;
  c.gen.core_count = 2;
  c.gen.seed = 1;
  c.count = 20;
  c.run.limits.time_limit = time_limit;
  c.out_dir = dir;
  fs::remove_all(dir);
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignResult res = run_campaign(c);
  const double ratio = res.schedulability_ratio();
  bool pass = fs::exists(dir / "distribution.csv") && ratio > 0.0 && ratio <= 1.0;
  int props = 0;
  for (const auto& s : res.cases) {
    if (s.runtime && *s.runtime > 600.0) {
      detail("case " + std::to_string(s.index) + " exceeded 10 minutes");
      pass = false;
    }
    if (!s.feasible()) continue;
    char name[32];
    std::snprintf(name, sizeof name, "case_%04d", s.index);
    const fs::path cd = dir / name;
    RunOptions o;
    o.limits.time_limit = time_limit;
    const DagSpec dag = load_dag(cd / "dag.json");
    const CaseResult r = run_case(dag, o);
    std::vector<std::string> notes;
    const auto bad = properties(dag, r, time_limit, notes);
    for (const auto& b : bad) detail("case " + std::to_string(s.index) + ": " + b);
    for (const auto& n : notes) detail("case " + std::to_string(s.index) + ": note: " + n);
    if (!(r.metrics.sinks.empty() || !s.metrics || r.metrics.sinks.front() == *s.metrics)) {
      detail("case " + std::to_string(s.index) + ": rerun differs from the campaign row");
      pass = false;
    }
    pass = pass && bad.empty();
    props += bad.empty() ? 1 : 0;
  }
  std::ostringstream o;
  o << res.cases.size() << " DAGs (6 nodes, 3 sensors, 7 edges, 2 cores) in "
    << seconds_since(t0) << " s; feasible " << res.feasible << ", schedulability ratio " << ratio
    << "; " << props << " feasible cases pass the property suite; CSV " << (dir / "distribution.csv").string();
  detail(o.str());
  verdict(8, pass, "random-DAG campaign smoke test");
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  double time_limit = 600.0;
  double oracle_limit = 300.0;
  int tiny = 200;
  std::string campaign_dir = "acceptance_campaign";
  app.add_option("--only", only, "Criteria to run")->delimiter(',');
  app.add_option("--time-limit", time_limit, "Solver limit per case, seconds")->capture_default_str();
  app.add_option("--oracle-limit", oracle_limit, "Exhaustive search limit per Table 3 case")
      ->capture_default_str();
  app.add_option("--tiny", tiny, "Tiny DAGs for the oracle comparison")->capture_default_str();
  app.add_option("--campaign-dir", campaign_dir, "Where the campaign writes")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  auto want = [&](int k) { return only.empty() || std::find(only.begin(), only.end(), k) != only.end(); };
  Runner run(time_limit);
  int failed = 0;
  auto guard = [&](int k, auto&& fn) {
    if (!want(k)) return;
    try {
      if (!fn()) ++failed;
    } catch (const std::exception& e) {
      detail(std::string("exception: ") + e.what());
      verdict(k, false, "aborted");
      ++failed;
    }
  };
  guard(1, [&] { return criterion1(run); });
  guard(2, [&] { return criterion2(run); });
  guard(3, [&] { return criterion3(); });
  guard(4, [&] { return criterion4(run, oracle_limit); });
  guard(5, [&] { return criterion5(run); });
  guard(6, [&] { return criterion6(tiny, 60.0); });
  guard(7, [&] { return criterion7(run); });
  guard(8, [&] { return criterion8(campaign_dir, time_limit); });
  return failed == 0 ? 0 : 1;
}
