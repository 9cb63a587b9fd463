#include "doctest.h"
#include "fusched/campaign.hpp"
#include "fusched/io.hpp"
#include "helpers.hpp"

using namespace fusched;
namespace fs = std::filesystem;

namespace {

CampaignConfig small(const fs::path& dir, int count) {
  CampaignConfig c;
  c.gen.node_count = 4;
  c.gen.sensor_count = 2;
  c.gen.edge_count = 4;
  c.gen.periods = {10, 20};
  c.gen.seed = 7;
  c.count = count;
  c.run.limits.time_limit = 60;
  c.out_dir = dir;
  return c;
}

}  // namespace

TEST_SUITE("campaign") {

TEST_CASE("a one-case campaign equals a direct run") {
  const auto dir = testing::temp_dir("camp1");
  const CampaignConfig c = small(dir, 1);
  const CampaignResult res = run_campaign(c);
  REQUIRE(res.cases.size() == 1);
  GenConfig g = c.gen;
  const DagSpec dag = generate(g);
  const CaseResult direct = run_case(dag, c.run);
  const CaseSummary& s = res.cases[0];
  CHECK(s.status == to_string(direct.outcome.status));
  CHECK(s.objective == direct.metrics.levels);
  REQUIRE(s.metrics);
  CHECK(*s.metrics == direct.metrics.sinks.front());
  CHECK(s.checked);
  CHECK(load_dag(dir / "case_0000" / "dag.json") == dag);
  for (const char* f : {"schedule.json", "metrics.csv", "trace.tsv", "gantt.svg", "summary.json"}) {
    CHECK(fs::exists(dir / "case_0000" / f));
  }
  for (const char* f : {"manifest.json", "distribution.csv", "summary.json"}) CHECK(fs::exists(dir / f));
  fs::remove_all(dir);
}

TEST_CASE("interrupted campaigns resume") {
  const auto dir = testing::temp_dir("camp2");
  const CampaignConfig c = small(dir, 3);
  const CampaignResult first = run_campaign(c);
  fs::remove(dir / "case_0001" / "summary.json");
  const CampaignResult second = run_campaign(c);
  CHECK(second.resumed == 2);
  CHECK(second.feasible == first.feasible);
  for (int k = 0; k < 3; ++k) CHECK(second.cases[k].objective == first.cases[k].objective);

  CampaignConfig other = c;
  other.gen.seed = 8;
  CHECK_THROWS_AS(run_campaign(other), InputError);
  fs::remove_all(dir);
}

TEST_CASE("reproducible mode gives identical files for serial and parallel runs") {
  const auto a = testing::temp_dir("camp3a");
  const auto b = testing::temp_dir("camp3b");
  CampaignConfig ca = small(a, 4);
  ca.reproducible = true;
  CampaignConfig cb = small(b, 4);
  cb.reproducible = true;
  cb.workers = 2;
  run_campaign(ca);
  run_campaign(cb);
  for (const char* f : {"distribution.csv", "summary.json"}) {
    CHECK(read_file(a / f) == read_file(b / f));
  }
  for (const char* f : {"summary.json", "schedule.json", "gantt.svg"}) {
    CHECK(read_file(a / "case_0002" / f) == read_file(b / "case_0002" / f));
  }
  CHECK(read_file(a / "distribution.csv").find("case,seed,status,runtime_s,objective") == 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("bad campaign configs") {
  CampaignConfig c = small(testing::temp_dir("camp4"), 0);
  CHECK_THROWS_AS(run_campaign(c), InputError);
  c.count = 1;
  c.workers = 0;
  CHECK_THROWS_AS(run_campaign(c), InputError);
  fs::remove_all(c.out_dir);
}

TEST_CASE("distribution rows") {
  CaseSummary s;
  s.index = 3;
  s.seed = 10;
  s.status = "infeasible";
  CHECK(distribution_csv({s}) ==
        "case,seed,status,runtime_s,objective,MRT,MTD,PAoI,WCRT,MS\n3,10,infeasible,,,,,,,\n");
}

}
