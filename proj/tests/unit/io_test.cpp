#include "doctest.h"
#include "fusched/io.hpp"
#include "fusched/presets.hpp"
#include "helpers.hpp"

using namespace fusched;

TEST_SUITE("io") {

TEST_CASE("every preset survives a JSON round trip") {
  for (const auto& name : preset_names()) {
    const DagSpec d = make_preset(name);
    CHECK(dag_from_json(dag_to_json(d)) == d);
  }
}

TEST_CASE("unknown keys and wrong types are rejected") {
  CHECK_THROWS_AS(dag_from_json(R"({"tasks": [], "extra": 1})"), InputError);
  CHECK_THROWS_AS(dag_from_json(R"({"tasks": [{"id": "a", "type": "sensor", "wcet": 1, "colour": 2}]})"),
                  InputError);
  CHECK_THROWS_AS(dag_from_json(R"({"tasks": [{"id": "a", "type": "sensor", "wcet": "one"}]})"),
                  InputError);
  CHECK_THROWS_AS(dag_from_json(R"({"tasks": [{"id": "a", "type": "nope", "wcet": 1}]})"), InputError);
  CHECK_THROWS_AS(dag_from_json(R"({"tasks": 3})"), InputError);
  CHECK_THROWS_AS(dag_from_json(R"({"tasks": [], "metrics": {"objective": [{"metric": "XYZ"}]}})"),
                  InputError);
  CHECK_THROWS_AS(dag_from_json("not json"), InputError);
}

TEST_CASE("files") {
  const auto dir = testing::temp_dir("io");
  const DagSpec d = make_preset("branch:A");
  write_file(dir / "sub" / "dag.json", dag_to_json(d));
  CHECK(load_dag(dir / "sub" / "dag.json") == d);
  CHECK_THROWS_AS(read_file(dir / "missing.json"), InputError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("unknown preset") { CHECK_THROWS_AS(make_preset("nope"), InputError); }

}
