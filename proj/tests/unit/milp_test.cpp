#include "doctest.h"
#include "fusched/milp.hpp"
#include "fusched/solver.hpp"

using namespace fusched;
using namespace fusched::milp;

TEST_SUITE("milp") {

TEST_CASE("expressions merge terms") {
  LinExpr e = LinExpr::var(0, 2.0) + LinExpr::var(1) - LinExpr::var(0, 2.0) + 3.0;
  e.normalize();
  REQUIRE(e.terms.size() == 1);
  CHECK(e.terms[0].first == 1);
  CHECK(e.constant == 3.0);
  CHECK(e.value({5.0, 7.0}) == 10.0);
  CHECK((-2.0 * LinExpr::var(0)).value({1.5}) == -3.0);
}

TEST_CASE("rows move constants to the right-hand side") {
  LinearProgram lp;
  const int x = lp.add_var("x", 0, 10, VarKind::Integer);
  lp.add(LinExpr::var(x) + 2.0, Sense::LE, LinExpr(5.0), "cap");
  REQUIRE(lp.rows.size() == 1);
  CHECK(lp.rows[0].rhs == 3.0);
  CHECK(lp.count("cap") == 1);
  CHECK(lp.count("other") == 0);
  CHECK(is_linear(lp));
}

TEST_CASE("constant rows are checked at build time") {
  LinearProgram lp;
  lp.add(LinExpr(1.0), Sense::LE, LinExpr(2.0), "ok");
  CHECK(lp.rows.empty());
  CHECK_FALSE(lp.trivially_infeasible);
  lp.add(LinExpr(3.0), Sense::LE, LinExpr(2.0), "bad");
  CHECK(lp.trivially_infeasible);
}

TEST_CASE("assignment check reports bounds, integrality and rows") {
  LinearProgram lp;
  const int x = lp.add_var("x", 0, 4, VarKind::Integer);
  const int b = lp.add_binary("b");
  lp.add(LinExpr::var(x) + LinExpr::var(b), Sense::GE, LinExpr(2.0), "cover");
  CHECK(check_assignment(lp, {1.0, 1.0}).empty());
  CHECK(check_assignment(lp, {0.5, 1.0}).size() == 2);
  CHECK(check_assignment(lp, {5.0, 0.0}).size() == 1);
}

TEST_CASE("LP text contains objective, groups and bounds") {
  LinearProgram lp;
  const int x = lp.add_var("x", 0, 4, VarKind::Integer);
  const int b = lp.add_binary("b");
  lp.add(LinExpr::var(x) + LinExpr::var(b), Sense::GE, LinExpr(2.0), "cover");
  lp.levels.push_back(LinExpr::var(x));
  const std::string text = to_lp_format(lp);
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("cover") != std::string::npos);
  CHECK(text.find("Binar") != std::string::npos);
  CHECK(text.find("General") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

}

TEST_SUITE("solver") {

TEST_CASE("lexicographic levels") {
  LinearProgram lp;
  const int x = lp.add_var("x", 0, 10, VarKind::Integer);
  const int y = lp.add_var("y", 0, 10, VarKind::Integer);
  lp.add(LinExpr::var(x) + LinExpr::var(y), Sense::GE, LinExpr(7.0), "sum");
  lp.add(LinExpr::var(x) - LinExpr::var(y), Sense::LE, LinExpr(3.0), "gap");
  lp.levels.push_back(LinExpr::var(x) + LinExpr::var(y));
  lp.levels.push_back(LinExpr::var(y));
  const SolveOutcome o = solve(lp);
  REQUIRE(o.status == SolveStatus::Optimal);
  CHECK(o.objective == std::vector<double>{7.0, 2.0});
  CHECK(o.assignment[x] == doctest::Approx(5.0));
  CHECK(o.assignment[y] == doctest::Approx(2.0));
}

TEST_CASE("infeasible program") {
  LinearProgram lp;
  const int x = lp.add_binary("x");
  lp.add(LinExpr::var(x), Sense::GE, LinExpr(2.0), "bad");
  lp.levels.push_back(LinExpr::var(x));
  CHECK(solve(lp).status == SolveStatus::Infeasible);
}

TEST_CASE("trivially infeasible program is not sent to the backend") {
  LinearProgram lp;
  lp.add(LinExpr(1.0), Sense::GE, LinExpr(2.0), "bad");
  lp.levels.push_back(LinExpr(0.0));
  CHECK(solve(lp).status == SolveStatus::Infeasible);
}

TEST_CASE("unknown backend") {
  CHECK_THROWS(make_backend("nope"));
  CHECK(make_backend("highs")->name() == "highs");
}

}
