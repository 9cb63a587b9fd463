#include "doctest.h"
#include "fusched/dag.hpp"
#include "fusched/expansion.hpp"
#include "fusched/gen.hpp"

using namespace fusched;

TEST_SUITE("gen") {

TEST_CASE("same seed gives the same DAG") {
  GenConfig c;
  c.seed = 42;
  CHECK(generate(c) == generate(c));
  GenConfig other = c;
  other.seed = 43;
  CHECK_FALSE(generate(c) == generate(other));
}

TEST_CASE("generated DAGs honor the config") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GenConfig c;
    c.seed = seed;
    c.node_count = 8;
    c.sensor_count = 3;
    c.edge_count = 10;
    c.fusion_types = {TaskType::IFusion, TaskType::TFusion};
    const DagSpec d = generate(c);
    REQUIRE(validate(d).ok());
    CHECK(d.tasks.size() == 8);
    CHECK(d.core_count == 2);
    int edges = 0, sensors = 0;
    for (const auto& t : d.tasks) {
      edges += static_cast<int>(t.preds.size());
      sensors += t.type == TaskType::Sensor;
      if (t.preds.size() > 1) CHECK((t.type == TaskType::IFusion || t.type == TaskType::TFusion));
      if (t.type == TaskType::Sensor) {
        CHECK(std::find(c.periods.begin(), c.periods.end(), t.period) != c.periods.end());
      }
    }
    CHECK(edges == 10);
    CHECK(sensors == 3);
    const auto g = build_graph(d);
    for (int i = 3; i < g.size(); ++i) CHECK_FALSE(g.preds[i].empty());
    CHECK(adjust_branch_successors(d) == d);
  }
}

TEST_CASE("smallest chain") {
  GenConfig c;
  c.node_count = 2;
  c.sensor_count = 1;
  c.edge_count = 1;
  const DagSpec d = generate(c);
  REQUIRE(d.tasks.size() == 2);
  CHECK(d.tasks[0].type == TaskType::Sensor);
  CHECK(d.tasks[1].type == TaskType::Subscription);
  CHECK(d.tasks[1].preds == std::vector<std::string>{d.tasks[0].id});
  CHECK(d.metrics.sinks == std::vector<std::string>{d.tasks[1].id});
}

TEST_CASE("impossible configs are rejected") {
  const auto bad = [](auto edit) {
    GenConfig c;
    edit(c);
    CHECK_THROWS_AS(check_config(c), InputError);
    CHECK_THROWS_AS(generate(c), InputError);
  };
  bad([](GenConfig& c) { c.edge_count = 4; });
  bad([](GenConfig& c) { c.edge_count = 15; });
  bad([](GenConfig& c) { c.edge_count = 13; });
  bad([](GenConfig& c) { c.sensor_count = 0; });
  bad([](GenConfig& c) { c.sensor_count = 6; });
  bad([](GenConfig& c) { c.fusion_types = {}; });
  bad([](GenConfig& c) { c.fusion_types = {TaskType::Subscription}; });
  bad([](GenConfig& c) { c.periods = {}; });
  bad([](GenConfig& c) { c.util_min = 0.5; });
  bad([](GenConfig& c) { c.core_count = 0; });
  GenConfig full;
  full.edge_count = 12;
  CHECK_NOTHROW(check_config(full));
}

TEST_CASE("tiny DAGs stay under the cap") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const DagSpec d = generate_tiny(seed, 10);
    CHECK(d.tasks.size() <= 4);
    CHECK(make_problem(d).table.total_instances() <= 10);
  }
}

}
