#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fusched/milp.hpp"

namespace fusched {

enum class SolveStatus {
  Optimal,
  FeasibleTimeout,  ///< time limit hit with an incumbent
  Timeout,          ///< time limit hit before any incumbent
  Infeasible,
  Error,
};

std::string_view to_string(SolveStatus s);
inline bool has_solution(SolveStatus s) {
  return s == SolveStatus::Optimal || s == SolveStatus::FeasibleTimeout;
}

struct SolveLimits {
  double time_limit = 600.0;  ///< seconds, shared by all objective levels
  double mip_gap = 0.0;       ///< relative
  bool deterministic = true;  ///< fixed seed, one thread
  int seed = 0;
  std::string log_file;       ///< solver log destination, empty for none
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Error;
  std::vector<double> assignment;  ///< one value per variable
  std::vector<double> objective;   ///< optimum (or incumbent) per level
  double wall_time = 0.0;          ///< seconds
  std::string message;
};

/// Result of minimizing one linear objective.
struct LevelResult {
  SolveStatus status = SolveStatus::Error;
  std::vector<double> x;
  double objective = 0.0;
  std::string message;
};

class MilpBackend {
 public:
  virtual ~MilpBackend() = default;
  virtual std::string name() const = 0;
  /// Minimizes `objective` over `lp` plus `extra` rows, optionally from a warm start.
  virtual LevelResult minimize(const milp::LinearProgram& lp, const milp::LinExpr& objective,
                               const std::vector<milp::Row>& extra,
                               const std::vector<double>* warm_start, double time_limit,
                               const SolveLimits& limits) = 0;
};

/// Names the backend in `name`, or in $FUSCHED_BACKEND, or the default ("highs").
/// Throws std::runtime_error for an unknown backend.
std::unique_ptr<MilpBackend> make_backend(std::string_view name = {});

/// Hierarchical solve: each level is minimized, then bounded by its optimum
/// while the next level is minimized. Integer variables are rounded and the
/// whole assignment is re-checked before a solution is reported.
SolveOutcome solve(const milp::LinearProgram& lp, const SolveLimits& limits = {},
                   MilpBackend* backend = nullptr);

}  // namespace fusched
