#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fusched::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Integer, Binary };

struct Variable {
  std::string name;
  double lb = 0.0;
  double ub = kInf;
  VarKind kind = VarKind::Continuous;
};

/// Affine expression: sum of coeff * var plus a constant.
struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  LinExpr() = default;
  LinExpr(double c) : constant(c) {}  // NOLINT(google-explicit-constructor)
  static LinExpr var(int index, double coeff = 1.0) {
    LinExpr e;
    e.terms.emplace_back(index, coeff);
    return e;
  }

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(double k);
  /// Merges duplicate variables and drops zero coefficients.
  void normalize();
  double value(const std::vector<double>& x) const;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(double k, LinExpr e);
LinExpr operator-(LinExpr e);

enum class Sense { LE, GE, EQ };

struct Row {
  std::vector<std::pair<int, double>> terms;  ///< normalized, no constant
  Sense sense = Sense::LE;
  double rhs = 0.0;
  int group = 0;
};

class LinearProgram {
 public:
  int add_var(std::string name, double lb, double ub, VarKind kind);
  int add_binary(std::string name) { return add_var(std::move(name), 0, 1, VarKind::Binary); }

  /// Adds `lhs (sense) rhs`. Constraints with no variables are checked and
  /// dropped; a violated constant constraint marks the program infeasible.
  void add(const LinExpr& lhs, Sense sense, const LinExpr& rhs, std::string_view group);

  int group_id(std::string_view name);
  std::size_t count(std::string_view group) const;

  std::vector<Variable> vars;
  std::vector<Row> rows;
  std::vector<std::string> groups;
  std::vector<LinExpr> levels;  ///< minimized lexicographically, first level first
  bool trivially_infeasible = false;
  std::string infeasible_reason;
};

struct Violation {
  std::string what;
  double amount = 0.0;
};

/// Substitutes `x` into every bound, integrality requirement and row.
std::vector<Violation> check_assignment(const LinearProgram& lp, const std::vector<double>& x,
                                        double tol = 1e-6);

/// True when every row is a plain weighted sum of distinct variables.
bool is_linear(const LinearProgram& lp);

/// CPLEX LP text for the given objective level, with group comments.
std::string to_lp_format(const LinearProgram& lp, std::size_t level = 0);

}  // namespace fusched::milp
