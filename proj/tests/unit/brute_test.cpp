#include "doctest.h"
#include "fusched/brute_force.hpp"
#include "fusched/gen.hpp"
#include "fusched/pipeline.hpp"
#include "fusched/presets.hpp"

using namespace fusched;

TEST_SUITE("brute") {

TEST_CASE("caps are enforced") {
  const Problem p = make_problem(make_preset("instance-count-example"));
  BruteLimits lim;
  lim.max_instances = 10;
  lim.max_delta = 1000;
  CHECK_THROWS_AS(brute_force_solve(p, p.dag.metrics, lim), InputError);
  lim.max_instances = 1000;
  lim.max_delta = 100;
  CHECK_THROWS_AS(brute_force_solve(p, p.dag.metrics, lim), InputError);
  lim.max_delta = 1000;
  lim.grid = 0;
  CHECK_THROWS_AS(brute_force_solve(p, p.dag.metrics, lim), InputError);
}

TEST_CASE("oracle reproduces the two-sensor optimum") {
  const Problem p = make_problem(make_preset("two-sensor:2:w-fus"));
  BruteLimits lim;
  lim.max_instances = 100;
  lim.max_delta = 100;
  const BruteResult r = brute_force_solve(p, p.dag.metrics, lim);
  REQUIRE(r.outcome.status == SolveStatus::Optimal);
  REQUIRE(r.schedule);
  CHECK(validate_schedule(*r.schedule, p).ok());
  CHECK(r.metrics.sinks[0].mrt == 8);
  CHECK(r.metrics.sinks[0].mtd == 1);
}

TEST_CASE("a cutoff below the optimum is infeasible") {
  const Problem p = make_problem(make_preset("two-sensor:2:w-fus"));
  BruteLimits lim;
  lim.max_instances = 100;
  lim.max_delta = 100;
  lim.cutoff = {8.0};
  CHECK(brute_force_solve(p, p.dag.metrics, lim).outcome.status == SolveStatus::Infeasible);
  lim.cutoff = {9.0};
  CHECK(brute_force_solve(p, p.dag.metrics, lim).outcome.status == SolveStatus::Optimal);
}

TEST_CASE("oracle and ILP agree on tiny DAGs") {
  RunOptions opt;
  opt.limits.time_limit = 60;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const DagSpec d = generate_tiny(seed);
    const CaseResult ilp = run_case(d, opt);
    const BruteResult bf = brute_force_solve(ilp.problem, ilp.problem.dag.metrics, {});
    CAPTURE(seed);
    CHECK(to_string(ilp.outcome.status) == to_string(bf.outcome.status));
    if (has_solution(ilp.outcome.status) && has_solution(bf.outcome.status)) {
      CHECK(ilp.outcome.objective == bf.outcome.objective);
    }
  }
}

}
