#include "doctest.h"
#include "fusched/io.hpp"
#include "fusched/pipeline.hpp"
#include "fusched/presets.hpp"

using namespace fusched;

namespace {

const CaseResult& solved() {
  static const CaseResult r = [] {
    RunOptions opt;
    opt.limits.time_limit = 60;
    return run_case(make_preset("two-sensor:2:i-fus"), opt);
  }();
  return r;
}

}  // namespace

TEST_SUITE("schedule") {

TEST_CASE("solved schedule is valid and matches the solver values") {
  const CaseResult& r = solved();
  REQUIRE(r.outcome.status == SolveStatus::Optimal);
  REQUIRE(r.schedule);
  CHECK(r.check.ok());
  REQUIRE(r.metrics.sinks.size() == 1);
  CHECK(r.metrics.sinks[0].mrt == 6);
  CHECK(r.metrics.sinks[0].mtd == 3);
  CHECK(epigraph_mismatches(r.metrics, r.epigraph, r.problem.dag.metrics).empty());
  CHECK(r.schedule->instance_count() == r.problem.table.total_instances());
}

TEST_CASE("tampered schedules are rejected") {
  const CaseResult& r = solved();
  REQUIRE(r.schedule);
  {
    Schedule s = *r.schedule;
    s.inst[0][1].core = s.core_count;
    CHECK_FALSE(validate_schedule(s, r.problem).ok());
  }
  {
    Schedule s = *r.schedule;
    const Tick period = r.problem.task(0).period;
    s.inst[0][1].start -= period;
    s.inst[0][1].finish -= period;
    CHECK_FALSE(validate_schedule(s, r.problem).ok());
  }
  {
    Schedule s = *r.schedule;
    s.inst[2][0].finish += 1;
    CHECK_FALSE(validate_schedule(s, r.problem).ok());
  }
  {
    Schedule s = *r.schedule;
    s.inst[2].pop_back();
    CHECK_FALSE(validate_schedule(s, r.problem).ok());
  }
}

TEST_CASE("replay reproduces the metrics") {
  const CaseResult& r = solved();
  REQUIRE(r.schedule);
  const MetricConfig& mc = r.problem.dag.metrics;
  const ReplayResult two = replay(*r.schedule, r.problem, mc, 2);
  const ReplayResult five = replay(*r.schedule, r.problem, mc, 5);
  CHECK(two.metrics.sinks == r.metrics.sinks);
  CHECK(five.metrics.sinks == r.metrics.sinks);
  CHECK(five.trace.size() > two.trace.size());
  CHECK_FALSE(format_trace(two.trace).empty());
}

TEST_CASE("objective levels from a report") {
  const CaseResult& r = solved();
  const auto levels = objective_levels(r.metrics, r.problem.dag.metrics);
  REQUIRE(levels.size() == 1);
  CHECK(levels[0] == doctest::Approx(9.0));
  CHECK(r.outcome.objective[0] == doctest::Approx(9.0));
}

TEST_CASE("provenance sets of sensor instances contain themselves") {
  const CaseResult& r = solved();
  const auto prov = provenance_sets(*r.schedule, r.problem);
  CHECK(prov[0][0] == std::vector<std::pair<int, int>>{{0, 1}});
  for (const auto& set : prov[2]) CHECK(set.size() >= 1);
}

TEST_CASE("schedule JSON round trip") {
  const CaseResult& r = solved();
  const std::string text = schedule_to_json(*r.schedule);
  CHECK(schedule_from_json(text) == *r.schedule);
  CHECK_THROWS_AS(schedule_from_json("{\"hp\": 1, \"bogus\": 2}"), InputError);
}

TEST_CASE("metrics CSV is long format") {
  const std::string csv = metrics_csv(solved().metrics);
  CHECK(csv.rfind("sink,sensor,metric,value", 0) == 0);
  CHECK(csv.find("t3,,MRT,6") != std::string::npos);
}

}
