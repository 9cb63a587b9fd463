#include "doctest.h"
#include "fusched/dag.hpp"
#include "fusched/presets.hpp"
#include "helpers.hpp"

using namespace fusched;
using testing::task;

TEST_SUITE("dag") {

TEST_CASE("valid DAG gets default deadlines") {
  DagSpec d = testing::pair_dag(TaskType::WFusion);
  const auto r = validate(d);
  REQUIRE(r.ok());
  CHECK(*r.dag->tasks[0].deadline == 10);
  CHECK(*r.dag->tasks[1].deadline == 20);
  CHECK(*r.dag->tasks[2].deadline == 20);
}

TEST_CASE("structural errors are all reported") {
  DagSpec d;
  d.core_count = 0;
  d.tasks = {task("s", 0, 10, TaskType::Sensor, {"x"}), task("s", 1, 5, TaskType::Subscription)};
  const auto r = validate(d);
  CHECK_FALSE(r.ok());
  CHECK(r.errors.size() >= 4);
  CHECK_THROWS_AS(validated(d), InputError);
}

TEST_CASE("cycles and dangling ids are rejected") {
  DagSpec d;
  d.tasks = {task("s", 1, 10, TaskType::Sensor), task("a", 1, 0, TaskType::WFusion, {"s", "b"}),
             task("b", 1, 0, TaskType::Subscription, {"a"})};
  CHECK_THROWS_AS(build_graph(d), InputError);
  d.tasks[2].preds = {"nope"};
  CHECK_THROWS_AS(build_graph(d), InputError);
}

TEST_CASE("timer and event periods") {
  DagSpec d = testing::pair_dag(TaskType::WFusion);
  d.tasks[2].period = 5;
  CHECK_FALSE(validate(d).ok());
  d = testing::pair_dag(TaskType::TFusion);
  d.tasks[2].period = 0;
  CHECK_FALSE(validate(d).ok());
}

TEST_CASE("metric config must name real sinks and sensors") {
  DagSpec d = testing::pair_dag(TaskType::WFusion);
  d.metrics.sinks = {"a"};
  CHECK_FALSE(validate(d).ok());
  d.metrics.sinks = {"f"};
  d.metrics.wcrt_sensors = {"f"};
  CHECK_FALSE(validate(d).ok());
}

TEST_CASE("branch successors become single-input i-fusion") {
  DagSpec d;
  d.tasks = {task("s", 1, 10, TaskType::Sensor), task("a", 1, 0, TaskType::Subscription, {"s"}),
             task("b", 1, 0, TaskType::Subscription, {"s"}),
             task("c", 1, 0, TaskType::Subscription, {"a"})};
  const DagSpec adj = adjust_branch_successors(d);
  CHECK(adj.tasks[1].type == TaskType::IFusion);
  CHECK(adj.tasks[2].type == TaskType::IFusion);
  CHECK(adj.tasks[3].type == TaskType::Subscription);
  CHECK(adjust_branch_successors(adj) == adj);
}

TEST_CASE("producers skip subscriptions") {
  DagSpec d;
  d.tasks = {task("s", 1, 10, TaskType::Sensor), task("a", 1, 0, TaskType::Subscription, {"s"}),
             task("f", 1, 0, TaskType::WFusion, {"a"})};
  const auto pm = compute_producers(d);
  CHECK(pm.producer_of == std::vector<int>{0, 0, 2});
  CHECK(pm.pred_producers_of[2] == std::vector<int>{0});
}

TEST_CASE("reachable sensors and evaluated sinks") {
  const DagSpec d = validated(make_preset("instance-count-example"));
  const auto g = build_graph(d);
  CHECK(reachable_sensors(d, g, d.index_of("t11")) == std::vector<int>{1, 2, 3});
  CHECK(evaluated_sinks(d, g) == std::vector<int>{9, 10});
}

}
