#include "fusched/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "Highs.h"

namespace fusched {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleTimeout: return "feasible-timeout";
    case SolveStatus::Timeout: return "timeout";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Error: return "error";
  }
  return "?";
}

namespace {

class HighsBackend final : public MilpBackend {
 public:
  std::string name() const override { return "highs"; }

  LevelResult minimize(const milp::LinearProgram& lp, const milp::LinExpr& objective,
                       const std::vector<milp::Row>& extra, const std::vector<double>* warm,
                       double time_limit, const SolveLimits& limits) override {
    const auto n = static_cast<HighsInt>(lp.vars.size());
    HighsLp model;
    model.num_col_ = n;
    model.sense_ = ObjSense::kMinimize;
    model.offset_ = objective.constant;
    model.col_cost_.assign(n, 0.0);
    for (const auto& [i, c] : objective.terms) model.col_cost_[i] += c;
    model.integrality_.resize(n);
    for (HighsInt i = 0; i < n; ++i) {
      const auto& v = lp.vars[i];
      model.col_lower_.push_back(v.lb == -milp::kInf ? -kHighsInf : v.lb);
      model.col_upper_.push_back(v.ub == milp::kInf ? kHighsInf : v.ub);
      model.integrality_[i] =
          v.kind == milp::VarKind::Continuous ? HighsVarType::kContinuous : HighsVarType::kInteger;
    }

    std::vector<const milp::Row*> rows;
    rows.reserve(lp.rows.size() + extra.size());
    for (const auto& r : lp.rows) rows.push_back(&r);
    for (const auto& r : extra) rows.push_back(&r);
    model.num_row_ = static_cast<HighsInt>(rows.size());
    std::vector<HighsInt> col_count(n + 1, 0);
    for (const auto* r : rows) {
      model.row_lower_.push_back(r->sense == milp::Sense::LE ? -kHighsInf : r->rhs);
      model.row_upper_.push_back(r->sense == milp::Sense::GE ? kHighsInf : r->rhs);
      for (const auto& t : r->terms) ++col_count[t.first + 1];
    }
    auto& a = model.a_matrix_;
    a.format_ = MatrixFormat::kColwise;
    a.num_col_ = n;
    a.num_row_ = model.num_row_;
    a.start_.assign(n + 1, 0);
    for (HighsInt i = 0; i < n; ++i) a.start_[i + 1] = a.start_[i] + col_count[i + 1];
    a.index_.resize(a.start_[n]);
    a.value_.resize(a.start_[n]);
    std::vector<HighsInt> fill(a.start_.begin(), a.start_.end() - 1);
    for (HighsInt r = 0; r < model.num_row_; ++r) {
      for (const auto& [i, c] : rows[r]->terms) {
        a.index_[fill[i]] = r;
        a.value_[fill[i]] = c;
        ++fill[i];
      }
    }

    Highs h;
    h.setOptionValue("output_flag", !limits.log_file.empty());
    h.setOptionValue("log_to_console", false);
    if (!limits.log_file.empty()) h.setOptionValue("log_file", limits.log_file);
    h.setOptionValue("time_limit", std::max(0.01, time_limit));
    h.setOptionValue("mip_rel_gap", limits.mip_gap);
    h.setOptionValue("mip_abs_gap", 1e-7);
    h.setOptionValue("random_seed", limits.seed);
    if (limits.deterministic) h.setOptionValue("threads", 1);
    h.setOptionValue("mip_improving_solution_save", true);

    LevelResult out;
    if (h.passModel(std::move(model)) == HighsStatus::kError) {
      out.message = "backend rejected the model";
      return out;
    }
    if (warm != nullptr) {
      HighsSolution sol;
      sol.col_value = *warm;
      sol.value_valid = true;
      h.setSolution(sol);
    }
    const HighsStatus run = h.run();
    const HighsModelStatus ms = h.getModelStatus();
    const HighsInfo& info = h.getInfo();
    const bool has_x = info.primal_solution_status == kSolutionStatusFeasible;
    if (has_x) {
      out.x = h.getSolution().col_value;
      out.objective = info.objective_function_value;
    }
    switch (ms) {
      case HighsModelStatus::kOptimal:
        out.status = SolveStatus::Optimal;
        break;
      case HighsModelStatus::kInfeasible:
      case HighsModelStatus::kUnboundedOrInfeasible:
        out.status = SolveStatus::Infeasible;
        break;
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kInterrupt:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
        out.status = has_x ? SolveStatus::FeasibleTimeout : SolveStatus::Timeout;
        break;
      case HighsModelStatus::kSolveError:
        // Claimed optimum that failed the backend's own tolerance check; the
        // caller rounds and re-checks the assignment independently.
        if (const auto& saved = h.getSavedMipSolutions(); !saved.empty()) {
          out.x = saved.back().col_value;
          out.objective = saved.back().objective;
          out.status = SolveStatus::Optimal;
          return out;
        }
        out.status = SolveStatus::Error;
        out.message = "backend status: " + h.modelStatusToString(ms);
        break;
      default:
        out.status = SolveStatus::Error;
        out.message = "backend status: " + h.modelStatusToString(ms);
        break;
    }
    if (run == HighsStatus::kError && out.status == SolveStatus::Optimal) {
      out.status = SolveStatus::Error;
      out.message = "backend reported an error";
    }
    if (out.status == SolveStatus::Optimal && !has_x) {
      out.status = SolveStatus::Error;
      out.message = "optimal status without a primal solution";
    }
    return out;
  }
};

bool integral_coefficients(const milp::LinExpr& e) {
  return std::all_of(e.terms.begin(), e.terms.end(),
                     [](const auto& t) { return t.second == std::round(t.second); });
}

/// Re-solves the continuous variables with every integer fixed at its rounded
/// value, so that epigraph variables are exactly tight.
void polish(const milp::LinearProgram& lp, const std::vector<milp::LinExpr>& levels,
            std::vector<double>& x, double time_limit, const SolveLimits& limits,
            MilpBackend& backend) {
  milp::LinearProgram fixed = lp;
  bool any_continuous = false;
  for (std::size_t i = 0; i < fixed.vars.size(); ++i) {
    auto& v = fixed.vars[i];
    if (v.kind == milp::VarKind::Continuous) {
      any_continuous = true;
    } else {
      v.lb = v.ub = x[i];
    }
  }
  if (!any_continuous) return;
  milp::LinExpr total;
  for (const auto& l : levels) total += l;
  const LevelResult r = backend.minimize(fixed, total, {}, nullptr, time_limit, limits);
  if (r.status != SolveStatus::Optimal) return;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = lp.vars[i].kind == milp::VarKind::Continuous ? r.x[i] : std::round(r.x[i]);
  }
}

}  // namespace

std::unique_ptr<MilpBackend> make_backend(std::string_view name) {
  std::string chosen(name);
  if (chosen.empty()) {
    if (const char* env = std::getenv("FUSCHED_BACKEND"); env != nullptr) chosen = env;
  }
  if (chosen.empty() || chosen == "highs") return std::make_unique<HighsBackend>();
  throw std::runtime_error("MILP backend '" + chosen + "' is not available");
}

SolveOutcome solve(const milp::LinearProgram& lp, const SolveLimits& limits,
                   MilpBackend* backend) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  SolveOutcome out;
  if (lp.trivially_infeasible) {
    out.status = SolveStatus::Infeasible;
    out.message = lp.infeasible_reason;
    return out;
  }
  for (const auto& v : lp.vars) {
    if (v.lb > v.ub) {
      out.status = SolveStatus::Infeasible;
      out.message = "empty domain for " + v.name;
      return out;
    }
  }
  std::unique_ptr<MilpBackend> owned;
  if (backend == nullptr) {
    owned = make_backend();
    backend = owned.get();
  }

  std::vector<milp::LinExpr> levels = lp.levels;
  if (levels.empty()) levels.emplace_back(0.0);
  std::vector<milp::Row> fixed;
  std::vector<double> incumbent;
  out.status = SolveStatus::Optimal;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double remaining = limits.time_limit - elapsed();
    if (remaining <= 0.0) {
      out.status = incumbent.empty() ? SolveStatus::Timeout : SolveStatus::FeasibleTimeout;
      break;
    }
    LevelResult r = backend->minimize(lp, levels[k], fixed, incumbent.empty() ? nullptr : &incumbent,
                                      remaining, limits);
    if (r.status == SolveStatus::Infeasible || r.status == SolveStatus::Error) {
      if (k == 0 || r.status == SolveStatus::Error) {
        out.status = r.status;
        out.message = r.message;
        incumbent.clear();
      } else {
        out.status = SolveStatus::Error;
        out.message = "level " + std::to_string(k + 1) + " infeasible after fixing level " +
                      std::to_string(k);
      }
      break;
    }
    if (r.status == SolveStatus::Timeout) {
      out.status = incumbent.empty() ? SolveStatus::Timeout : SolveStatus::FeasibleTimeout;
      break;
    }
    incumbent = r.x;
    out.objective.push_back(r.objective);
    if (r.status == SolveStatus::FeasibleTimeout) {
      out.status = SolveStatus::FeasibleTimeout;
      break;
    }
    milp::LinExpr e = levels[k];
    e.normalize();
    double bound = r.objective - e.constant;
    if (integral_coefficients(e)) {
      bound = std::round(bound) + 1e-6;
    } else {
      bound += 1e-6 * std::max(1.0, std::abs(bound));
    }
    fixed.push_back({e.terms, milp::Sense::LE, bound, 0});
  }

  if (!incumbent.empty()) {
    for (std::size_t i = 0; i < lp.vars.size(); ++i) {
      if (lp.vars[i].kind != milp::VarKind::Continuous) incumbent[i] = std::round(incumbent[i]);
    }
    polish(lp, levels, incumbent, std::max(1.0, limits.time_limit - elapsed()), limits, *backend);
    const auto bad = milp::check_assignment(lp, incumbent, 1e-5);
    if (!bad.empty()) {
      out.status = SolveStatus::Error;
      out.message = "solution fails re-check: " + bad.front().what + " by " +
                    std::to_string(bad.front().amount);
    }
    for (std::size_t k = 0; k < out.objective.size(); ++k) {
      out.objective[k] = levels[k].value(incumbent);
    }
    out.assignment = std::move(incumbent);
  }
  out.wall_time = elapsed();
  return out;
}

}  // namespace fusched
