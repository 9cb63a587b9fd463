#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fusched/brute_force.hpp"
#include "fusched/campaign.hpp"
#include "fusched/gantt.hpp"
#include "fusched/gen.hpp"
#include "fusched/io.hpp"
#include "fusched/pipeline.hpp"
#include "fusched/presets.hpp"

using namespace fusched;
namespace fs = std::filesystem;

namespace {

enum Exit { kOptimal = 0, kFeasibleTimeout = 2, kInfeasible = 3, kInputError = 4, kSolverError = 5,
            kTimeout = 6 };

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return kOptimal;
    case SolveStatus::FeasibleTimeout: return kFeasibleTimeout;
    case SolveStatus::Infeasible: return kInfeasible;
    case SolveStatus::Timeout: return kTimeout;
    case SolveStatus::Error: break;
  }
  return kSolverError;
}

struct Source {
  std::string spec;
  std::string preset;

  void add(CLI::App* app) {
    auto* a = app->add_option("--spec", spec, "DAG spec (JSON)")->check(CLI::ExistingFile);
    auto* b = app->add_option("--preset", preset, "Built-in case study (see `presets`)");
    a->excludes(b);
  }
  DagSpec load() const {
    if (!spec.empty()) return load_dag(spec);
    if (!preset.empty()) return make_preset(preset);
    throw InputError("one of --spec or --preset is required");
  }
};

/// metric[:weight[:priority]], comma separated.
std::vector<MetricWeight> parse_objective(const std::string& text) {
  std::vector<MetricWeight> out;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    std::vector<std::string> parts;
    std::stringstream fields(item);
    std::string f;
    while (std::getline(fields, f, ':')) parts.push_back(f);
    if (parts.empty() || parts.size() > 3) throw InputError("bad --metrics term '" + item + "'");
    const auto m = parse_metric(parts[0]);
    if (!m) throw InputError("unknown metric '" + parts[0] + "'");
    MetricWeight w{*m, 1.0, 1};
    try {
      if (parts.size() > 1) w.weight = std::stod(parts[1]);
      if (parts.size() > 2) w.priority = std::stoi(parts[2]);
    } catch (const std::exception&) {
      throw InputError("bad --metrics term '" + item + "'");
    }
    out.push_back(w);
  }
  if (out.empty()) throw InputError("--metrics is empty");
  return out;
}

struct SolveFlags {
  std::optional<int> cores;
  double time_limit = 600.0;
  std::string metrics;
  std::vector<std::string> sinks;
  std::vector<std::string> wcrt_sensors;
  int delta_multiplier = 3;
  bool pin_tasks = false;
  bool deterministic = false;
  double big_m_factor = 1.0;

  void add(CLI::App* app) {
    app->add_option("--cores", cores, "Override the core count")->check(CLI::PositiveNumber);
    app->add_option("--time-limit", time_limit, "Solver time limit in seconds")
        ->check(CLI::PositiveNumber);
    app->add_option("--metrics", metrics,
                    "Objective terms metric[:weight[:priority]], e.g. MRT:1:2,PAoI");
    app->add_option("--sinks", sinks, "Evaluated sinks")->delimiter(',');
    app->add_option("--wcrt-sensors", wcrt_sensors, "Sensors whose WCRT is evaluated")
        ->delimiter(',');
    app->add_option("--delta-multiplier", delta_multiplier, "Window length in hyperperiods")
        ->check(CLI::Range(3, 100));
    app->add_flag("--pin-tasks", pin_tasks, "Keep all instances of a task on one core");
    app->add_flag("--deterministic", deterministic,
                  "Byte-identical artifacts: omit wall-clock times");
    app->add_option("--big-m-factor", big_m_factor, "Scale every big-M constant")
        ->check(CLI::PositiveNumber);
  }
  RunOptions options(const DagSpec& dag) const {
    RunOptions o;
    o.delta_multiplier = delta_multiplier;
    o.ilp.pin_tasks = pin_tasks;
    o.ilp.big_m_factor = big_m_factor;
    o.limits.time_limit = time_limit;
    o.cores = cores;
    if (!metrics.empty() || !sinks.empty() || !wcrt_sensors.empty()) {
      MetricConfig mc = dag.metrics;
      if (!metrics.empty()) mc.objective = parse_objective(metrics);
      if (!sinks.empty()) mc.sinks = sinks;
      if (!wcrt_sensors.empty()) mc.wcrt_sensors = wcrt_sensors;
      o.metrics = mc;
    }
    return o;
  }
};

struct GenFlags {
  GenConfig g;
  std::vector<std::string> types{"w-fus"};

  void add(CLI::App* app) {
    app->add_option("--nodes", g.node_count, "Task count")->capture_default_str();
    app->add_option("--sensors", g.sensor_count, "Sensor count")->capture_default_str();
    app->add_option("--edges", g.edge_count, "Edge count")->capture_default_str();
    app->add_option("--fusion-types", types, "Types drawn for multi-input tasks")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--gen-cores", g.core_count, "Core count of generated DAGs")
        ->capture_default_str();
    app->add_option("--seed", g.seed, "Seed (case k uses seed + k)")->capture_default_str();
  }
  GenConfig config() const {
    GenConfig c = g;
    c.fusion_types.clear();
    for (const auto& t : types) {
      const auto tt = parse_task_type(t);
      if (!tt) throw InputError("unknown task type '" + t + "'");
      c.fusion_types.push_back(*tt);
    }
    return c;
  }
};

void print_violations(const ScheduleCheck& check) {
  for (const auto& v : check.violations) std::cerr << "violation: " << v << '\n';
  for (const auto& w : check.warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_run(const Source& src, const SolveFlags& sf, const std::string& out_dir) {
  const DagSpec dag = src.load();
  const RunOptions opt = sf.options(dag);
  const CaseResult r = run_case(dag, opt);
  std::cerr << "status: " << to_string(r.outcome.status);
  if (!sf.deterministic) std::cerr << " (" << r.outcome.wall_time << " s)";
  std::cerr << ", " << r.variables << " variables, " << r.constraints << " constraints\n";
  if (!r.outcome.message.empty()) std::cerr << r.outcome.message << '\n';
  if (!out_dir.empty()) write_case_artifacts(out_dir, apply_overrides(dag, opt), r);
  if (!r.schedule) return exit_code(r.outcome.status);
  std::cout << metrics_csv(r.metrics);
  print_violations(r.check);
  const auto mism = epigraph_mismatches(r.metrics, r.epigraph, r.problem.dag.metrics);
  for (const auto& m : mism) std::cerr << "mismatch: " << m << '\n';
  if (!r.check.ok() || !mism.empty()) return kSolverError;
  return exit_code(r.outcome.status);
}

int cmd_brute(const Source& src, const SolveFlags& sf, const BruteLimits& lim,
              const std::string& out_dir) {
  const DagSpec dag = src.load();
  const RunOptions opt = sf.options(dag);
  const Problem p = make_problem(apply_overrides(dag, opt), opt.delta_multiplier);
  BruteLimits l = lim;
  l.time_limit = sf.time_limit;
  const BruteResult r = brute_force_solve(p, p.dag.metrics, l);
  std::cerr << "status: " << to_string(r.outcome.status) << ", " << r.nodes << " nodes";
  if (!sf.deterministic) std::cerr << " (" << r.outcome.wall_time << " s)";
  std::cerr << '\n';
  if (!r.outcome.message.empty()) std::cerr << r.outcome.message << '\n';
  if (!r.schedule) return exit_code(r.outcome.status);
  std::cout << metrics_csv(r.metrics);
  if (!out_dir.empty()) write_file(fs::path(out_dir) / "schedule.json", schedule_to_json(*r.schedule));
  return exit_code(r.outcome.status);
}

int cmd_replay(const Source& src, const SolveFlags& sf, const std::string& schedule_path,
               int hyperperiods, const std::string& out_dir) {
  const DagSpec dag = src.load();
  const RunOptions opt = sf.options(dag);
  const Problem p = make_problem(apply_overrides(dag, opt), opt.delta_multiplier);
  const Schedule s = schedule_from_json(read_file(schedule_path));
  const ScheduleCheck check = validate_schedule(s, p);
  print_violations(check);
  if (!check.ok()) return kInputError;
  const ReplayResult r = replay(s, p, p.dag.metrics, hyperperiods);
  std::cout << metrics_csv(r.metrics);
  if (!out_dir.empty()) {
    write_file(fs::path(out_dir) / "replay_trace.tsv", format_trace(r.trace));
    write_file(fs::path(out_dir) / "replay_metrics.csv", metrics_csv(r.metrics));
  }
  return kOptimal;
}

int cmd_campaign(const GenFlags& gf, const SolveFlags& sf, int count, int workers, bool artifacts,
                 const std::string& out_dir) {
  if (out_dir.empty()) throw InputError("campaign needs --out-dir");
  CampaignConfig c;
  c.gen = gf.config();
  c.count = count;
  c.run = sf.options(DagSpec{});
  c.out_dir = out_dir;
  c.workers = workers;
  c.artifacts = artifacts;
  c.reproducible = sf.deterministic;
  const CampaignResult r = run_campaign(c);
  std::cout << "cases " << r.cases.size() << ", feasible " << r.feasible << ", resumed "
            << r.resumed << ", schedulability ratio " << r.schedulability_ratio() << '\n';
  const bool all_checked = std::all_of(r.cases.begin(), r.cases.end(), [](const CaseSummary& s) {
    return !s.feasible() || s.checked;
  });
  return all_checked ? kOptimal : kSolverError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fusion-aware static DAG scheduling via ILP"};
  app.require_subcommand(1);
  Source src;
  SolveFlags sf;
  GenFlags gf;
  std::string out_dir;

  auto* presets = app.add_subcommand("presets", "List built-in case studies");

  auto* validate_cmd = app.add_subcommand("validate", "Validate a DAG and print its normalized form");
  src.add(validate_cmd);

  auto* expand_cmd = app.add_subcommand("expand", "Print the instance table over the window");
  src.add(expand_cmd);
  expand_cmd->add_option("--delta-multiplier", sf.delta_multiplier, "Window length in hyperperiods")
      ->check(CLI::Range(3, 100));

  auto* run_cmd = app.add_subcommand("run", "Solve one DAG and write its artifacts");
  src.add(run_cmd);
  sf.add(run_cmd);
  run_cmd->add_option("--out-dir", out_dir, "Directory for schedule, trace, CSV and SVG");

  auto* export_cmd = app.add_subcommand("export-lp", "Write the model in LP format");
  src.add(export_cmd);
  sf.add(export_cmd);
  std::size_t level = 0;
  export_cmd->add_option("--level", level, "Objective level (0 = highest priority)");

  BruteLimits lim;
  auto* brute_cmd = app.add_subcommand("brute", "Exhaustive oracle for tiny DAGs");
  src.add(brute_cmd);
  sf.add(brute_cmd);
  brute_cmd->add_option("--max-instances", lim.max_instances)->capture_default_str();
  brute_cmd->add_option("--max-delta", lim.max_delta)->capture_default_str();
  brute_cmd->add_option("--grid", lim.grid, "PAoI cap step")->capture_default_str();
  brute_cmd->add_option("--cutoff", lim.cutoff, "Known attainable objective per level")
      ->delimiter(',');
  brute_cmd->add_option("--out-dir", out_dir, "Directory for the oracle schedule");

  std::string schedule_path;
  int hyperperiods = 100;
  auto* replay_cmd = app.add_subcommand("replay", "Tile a schedule and re-measure in ideal time");
  src.add(replay_cmd);
  sf.add(replay_cmd);
  replay_cmd->add_option("--schedule", schedule_path, "Schedule JSON")->required()->check(
      CLI::ExistingFile);
  replay_cmd->add_option("--hyperperiods", hyperperiods, "Steady hyperperiods")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  replay_cmd->add_option("--out-dir", out_dir, "Directory for the replay trace");

  auto* gen_cmd = app.add_subcommand("gen", "Generate one random DAG");
  gf.add(gen_cmd);
  std::string gen_out;
  gen_cmd->add_option("-o,--output", gen_out, "Output file (default: stdout)");

  int count = 100;
  int workers = 1;
  bool no_artifacts = false;
  auto* campaign_cmd = app.add_subcommand("campaign", "Generate and solve many random DAGs");
  gf.add(campaign_cmd);
  sf.add(campaign_cmd);
  campaign_cmd->add_option("--count", count, "Number of DAGs")->capture_default_str();
  campaign_cmd->add_option("--workers", workers, "Parallel cases")->capture_default_str();
  campaign_cmd->add_flag("--summary-only", no_artifacts, "Skip per-case schedules and renderings");
  campaign_cmd->add_option("--out-dir", out_dir, "Campaign directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (presets->parsed()) {
      for (const auto& n : preset_names()) std::cout << n << '\n';
      return kOptimal;
    }
    if (validate_cmd->parsed()) {
      const DagSpec dag = src.load();
      const ValidationResult v = validate(dag);
      if (!v.ok()) {
        for (const auto& e : v.errors) std::cerr << "error: " << e << '\n';
        return kInputError;
      }
      std::cout << dag_to_json(adjust_branch_successors(*v.dag));
      return kOptimal;
    }
    if (expand_cmd->parsed()) {
      const Problem p = make_problem(src.load(), sf.delta_multiplier);
      std::cout << "hyperperiod " << p.table.hp << ", window " << p.table.delta << '\n'
                << format_instance_table(p.dag, p.table);
      return kOptimal;
    }
    if (run_cmd->parsed()) return cmd_run(src, sf, out_dir);
    if (export_cmd->parsed()) {
      const DagSpec dag = src.load();
      const RunOptions opt = sf.options(dag);
      const Problem p = make_problem(apply_overrides(dag, opt), opt.delta_multiplier);
      const IlpModel m = build_model(p, p.dag.metrics, opt.ilp);
      std::cout << milp::to_lp_format(m.lp, level);
      return kOptimal;
    }
    if (brute_cmd->parsed()) return cmd_brute(src, sf, lim, out_dir);
    if (replay_cmd->parsed()) return cmd_replay(src, sf, schedule_path, hyperperiods, out_dir);
    if (gen_cmd->parsed()) {
      const std::string doc = dag_to_json(generate(gf.config()));
      if (gen_out.empty()) {
        std::cout << doc;
      } else {
        write_file(gen_out, doc);
      }
      return kOptimal;
    }
    if (campaign_cmd->parsed()) return cmd_campaign(gf, sf, count, workers, !no_artifacts, out_dir);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverError;
  }
  return kInputError;
}
