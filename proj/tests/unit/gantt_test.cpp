#include "doctest.h"
#include "fusched/gantt.hpp"
#include "fusched/pipeline.hpp"
#include "fusched/presets.hpp"

using namespace fusched;

namespace {

std::size_t occurrences(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (auto pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("gantt") {

TEST_CASE("empty schedule draws only lanes") {
  Schedule s;
  s.hp = 10;
  s.delta = 30;
  s.core_count = 2;
  const std::string svg = emit_gantt(s);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(occurrences(svg, "core 0") == 1);
  CHECK(occurrences(svg, "core 1") == 1);
  CHECK(occurrences(svg, "<g><title>") == 0);
}

TEST_CASE("one bar per instance, stable output") {
  RunOptions opt;
  opt.limits.time_limit = 60;
  const CaseResult r = run_case(make_preset("fusion-two-chains:WS"), opt);
  REQUIRE(r.schedule);
  std::vector<TaskType> types;
  for (const auto& t : r.problem.dag.tasks) types.push_back(t.type);
  const auto trace = schedule_trace(*r.schedule, r.problem);
  const std::string svg = emit_gantt(*r.schedule, trace, types);
  CHECK(occurrences(svg, "<g><title>") == 21);
  CHECK(svg.find(">t5.1<") != std::string::npos);
  CHECK(occurrences(svg, " trigger</title>") > 0);
  CHECK(svg == emit_gantt(*r.schedule, trace, types));
}

}
