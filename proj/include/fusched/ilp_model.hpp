#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "fusched/expansion.hpp"
#include "fusched/milp.hpp"

namespace fusched {

struct IlpOptions {
  /// Skip ordering variables for pairs that can never overlap.
  bool prune_overlap = true;
  /// The g-th instance (in a fixed order) may only use cores 0..g, and
  /// interchangeable tasks start their first instances in index order.
  bool symmetry_breaking = true;
  /// All instances of a task share one core.
  bool pin_tasks = false;
  /// Multiplies the big-M constant (for sensitivity checks).
  double big_m_factor = 1.0;
};

/// Start-time windows and candidate predecessor instances implied by the
/// constraints, tightened to a fixpoint. Indices are 0-based for j.
struct Windows {
  std::vector<std::vector<Tick>> est;  ///< earliest start
  std::vector<std::vector<Tick>> lst;  ///< latest start
  /// cand[i][j][e]: producer instance indices (1-based) that edge e of
  /// fusion instance j may use, ascending.
  std::vector<std::vector<std::vector<std::vector<int>>>> cand;
  bool feasible = true;
  std::string reason;

  Tick max_finish(const Problem& p) const;
};

Windows compute_windows(const Problem& problem);

/// Classes of tasks that can swap identities in any schedule without changing
/// feasibility or any metric: same parameters and inputs, consumed only by the
/// same fusion tasks, no distinguishing metric role. Members in index order.
std::vector<std::vector<int>> interchangeable_tasks(const Problem& problem,
                                                    const MetricConfig& metrics);

/// A binary that is either a model variable or a build-time constant.
struct Lit {
  int var = -1;
  bool value = false;

  static Lit constant(bool v) { return {-1, v}; }
  static Lit of(int v) { return {v, false}; }
  bool fixed() const { return var < 0; }
  bool is_true() const { return fixed() && value; }
  bool is_false() const { return fixed() && !value; }
  milp::LinExpr expr() const {
    return fixed() ? milp::LinExpr(value ? 1.0 : 0.0) : milp::LinExpr::var(var);
  }
  double eval(const std::vector<double>& x) const { return fixed() ? (value ? 1.0 : 0.0) : x[var]; }
};

struct SinkMetricVars {
  int sink = -1;
  int mrt = -1, mtd = -1, paoi = -1, ms = -1;
  std::vector<std::pair<int, int>> wcrt;  ///< (sensor task, variable)
};

struct IlpModel {
  milp::LinearProgram lp;
  Windows windows;
  double big_m = 0.0;
  std::vector<std::vector<int>> s, f;                    ///< [task][j]
  std::vector<std::vector<std::vector<int>>> y;          ///< [task][j][core]
  /// u[i][j][e] = (producer instance, literal) over the candidates of edge e.
  std::vector<std::vector<std::vector<std::vector<std::pair<int, Lit>>>>> u;
  std::map<std::tuple<int, int, int, int>, Lit> provenance;  ///< (task, j, sensor, js), 1-based
  std::vector<SinkMetricVars> metric_vars;
  std::vector<std::vector<MetricWeight>> levels;         ///< objective terms per level

  /// Instance index used on edge e of fusion instance j (both 0-based j/e).
  double used_index(int task, int j, int e, const std::vector<double>& x) const;
};

class ModelBuilder {
 public:
  ModelBuilder(const Problem& problem, const MetricConfig& metrics, IlpOptions options = {});

  void build_core_constraints();
  void build_trigger_constraints();
  void build_fusion_constraints();
  void build_provenance_constraints();
  void build_metric_constraints();
  void build_hp_copy_constraints();
  void build_objective();

  IlpModel finish() { return std::move(m_); }
  const IlpModel& model() const { return m_; }

 private:
  void create_variables();
  Lit provenance(int task, int j, int sensor, int js);
  milp::LinExpr idx_expr(int task, int j, int e) const;
  /// Gate constant for a constraint whose violation can be at most `span`.
  double gate(double span) const;
  double est(int i, int j) const { return static_cast<double>(m_.windows.est[i][j]); }
  double lft(int i, int j) const {
    return static_cast<double>(m_.windows.lst[i][j] + p_.task(i).wcet);
  }
  milp::LinExpr ex(int var) const { return milp::LinExpr::var(var); }

  const Problem& p_;
  MetricConfig metrics_;
  IlpOptions opt_;
  IlpModel m_;
  double M_ = 0.0;
  /// possible[i][j] = sorted (sensor, js) pairs that may reach instance j of task i.
  std::vector<std::vector<std::vector<std::pair<int, int>>>> possible_;
};

/// Runs every build step in order.
IlpModel build_model(const Problem& problem, const MetricConfig& metrics, IlpOptions options = {});

}  // namespace fusched
