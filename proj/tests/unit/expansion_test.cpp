#include "doctest.h"
#include "fusched/expansion.hpp"
#include "fusched/presets.hpp"
#include "helpers.hpp"

using namespace fusched;

TEST_SUITE("expansion") {

TEST_CASE("hyperperiod is the LCM of timer periods") {
  CHECK(hyperperiod(testing::pair_dag(TaskType::WFusion, 4, 6)) == 12);
  CHECK(hyperperiod(make_preset("instance-count-example")) == 60);
}

TEST_CASE("instance counts of the example DAG") {
  const Problem p = make_problem(make_preset("instance-count-example"));
  CHECK(p.table.hp == 60);
  CHECK(p.table.delta == 180);
  std::vector<int> first;
  for (int i = 0; i < p.task_count(); ++i) first.push_back(p.table.counts[i][1]);
  CHECK(first == std::vector<int>{6, 3, 4, 2, 6, 3, 3, 5, 3, 3, 3});
  for (int i = 0; i < p.task_count(); ++i) {
    CHECK(p.table.counts[i][3] - p.table.counts[i][2] == p.table.steady[i]);
    CHECK(p.table.n[i] == p.table.counts[i][3]);
  }
}

TEST_CASE("fusion counts follow the input rule") {
  const auto count = [](TaskType t) {
    return make_problem(testing::pair_dag(t, 10, 20)).table.counts[2][1];
  };
  CHECK(count(TaskType::IFusion) == 2);
  CHECK(count(TaskType::WFusion) == 1);
  CHECK(count(TaskType::TFusion) == 1);
}

TEST_CASE("phases and releases") {
  const Problem p = make_problem(testing::pair_dag(TaskType::WFusion, 10, 20));
  CHECK(p.table.phase(0, 1) == 1);
  CHECK(p.table.phase(0, 2) == 1);
  CHECK(p.table.phase(0, 3) == 2);
  CHECK(p.table.first_in_phase(0, 3) == 5);
  CHECK(p.table.releases[0] == std::vector<Tick>{0, 10, 20, 30, 40, 50});
  CHECK(p.table.releases[2].empty());
  CHECK(p.table.total_instances() == 6 + 3 + 3);
}

TEST_CASE("delta multiplier") {
  const Problem p = make_problem(testing::pair_dag(TaskType::WFusion, 10, 20), 5);
  CHECK(p.table.delta == 100);
  CHECK(p.table.counts[0].size() == 6);
}

TEST_CASE("no timer task means no hyperperiod") {
  DagSpec d;
  d.tasks = {testing::task("a", 1, 0, TaskType::Subscription, {"a"})};
  CHECK_THROWS(hyperperiod(d));
}

TEST_CASE("instance table text lists every instance") {
  const Problem p = make_problem(testing::pair_dag(TaskType::WFusion, 10, 20));
  const std::string text = format_instance_table(p.dag, p.table);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines >= static_cast<std::size_t>(p.table.total_instances()));
}

}
