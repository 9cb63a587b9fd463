#include "fusched/milp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace fusched::milp {

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  constant += o.constant;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  for (const auto& [v, c] : o.terms) terms.emplace_back(v, -c);
  constant -= o.constant;
  return *this;
}

LinExpr& LinExpr::operator*=(double k) {
  for (auto& t : terms) t.second *= k;
  constant *= k;
  return *this;
}

void LinExpr::normalize() {
  std::sort(terms.begin(), terms.end());
  std::vector<std::pair<int, double>> out;
  for (const auto& t : terms) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const auto& t) { return t.second == 0.0; });
  terms = std::move(out);
}

double LinExpr::value(const std::vector<double>& x) const {
  double v = constant;
  for (const auto& [i, c] : terms) v += c * x[i];
  return v;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(double k, LinExpr e) { return e *= k; }
LinExpr operator-(LinExpr e) { return e *= -1.0; }

int LinearProgram::add_var(std::string name, double lb, double ub, VarKind kind) {
  vars.push_back({std::move(name), lb, ub, kind});
  return static_cast<int>(vars.size()) - 1;
}

int LinearProgram::group_id(std::string_view name) {
  auto it = std::find(groups.begin(), groups.end(), name);
  if (it != groups.end()) return static_cast<int>(it - groups.begin());
  groups.emplace_back(name);
  return static_cast<int>(groups.size()) - 1;
}

std::size_t LinearProgram::count(std::string_view group) const {
  auto it = std::find(groups.begin(), groups.end(), group);
  if (it == groups.end()) return 0;
  const int g = static_cast<int>(it - groups.begin());
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [g](const Row& r) { return r.group == g; }));
}

void LinearProgram::add(const LinExpr& lhs, Sense sense, const LinExpr& rhs,
                        std::string_view group) {
  LinExpr e = lhs - rhs;
  e.normalize();
  const double r = -e.constant;
  if (e.terms.empty()) {
    const double eps = 1e-9;
    bool ok = sense == Sense::LE   ? 0.0 <= r + eps
              : sense == Sense::GE ? 0.0 >= r - eps
                                   : std::abs(r) <= eps;
    if (!ok && !trivially_infeasible) {
      trivially_infeasible = true;
      infeasible_reason = "constant constraint violated in group " + std::string(group);
    }
    return;
  }
  rows.push_back({std::move(e.terms), sense, r, group_id(group)});
}

std::vector<Violation> check_assignment(const LinearProgram& lp, const std::vector<double>& x,
                                        double tol) {
  std::vector<Violation> out;
  if (x.size() != lp.vars.size()) {
    out.push_back({"assignment has wrong length", 0.0});
    return out;
  }
  for (std::size_t i = 0; i < lp.vars.size(); ++i) {
    const auto& v = lp.vars[i];
    if (x[i] < v.lb - tol || x[i] > v.ub + tol) {
      out.push_back({"bound of " + v.name, std::max(v.lb - x[i], x[i] - v.ub)});
    }
    if (v.kind != VarKind::Continuous && std::abs(x[i] - std::round(x[i])) > tol) {
      out.push_back({"integrality of " + v.name, std::abs(x[i] - std::round(x[i]))});
    }
  }
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& row = lp.rows[r];
    double lhs = 0.0;
    double scale = 1.0;
    for (const auto& [i, c] : row.terms) {
      lhs += c * x[i];
      scale = std::max(scale, std::abs(c * x[i]));
    }
    double gap = row.sense == Sense::LE   ? lhs - row.rhs
                 : row.sense == Sense::GE ? row.rhs - lhs
                                          : std::abs(lhs - row.rhs);
    if (gap > tol * scale) {
      out.push_back({"row " + std::to_string(r) + " (" + lp.groups[row.group] + ")", gap});
    }
  }
  return out;
}

bool is_linear(const LinearProgram& lp) {
  for (const auto& row : lp.rows) {
    std::set<int> seen;
    for (const auto& [i, c] : row.terms) {
      if (i < 0 || i >= static_cast<int>(lp.vars.size()) || !std::isfinite(c)) return false;
      if (!seen.insert(i).second) return false;
    }
    if (!std::isfinite(row.rhs)) return false;
  }
  return true;
}

namespace {

std::string lp_name(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') ? c : '_';
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "v" + out;
  return out;
}

void write_terms(std::ostringstream& out, const std::vector<std::pair<int, double>>& terms,
                 const std::vector<std::string>& names) {
  if (terms.empty()) {
    out << " 0 " << names.front();
    return;
  }
  int on_line = 0;
  for (const auto& [i, c] : terms) {
    out << (c < 0 ? " - " : " + ");
    if (std::abs(c) != 1.0) out << std::abs(c) << ' ';
    out << names[i];
    if (++on_line % 8 == 0) out << "\n  ";
  }
}

}  // namespace

std::string to_lp_format(const LinearProgram& lp, std::size_t level) {
  std::vector<std::string> names;
  names.reserve(lp.vars.size());
  std::map<std::string, int> used;
  for (const auto& v : lp.vars) {
    std::string n = lp_name(v.name);
    int k = used[n]++;
    names.push_back(k == 0 ? n : n + "_" + std::to_string(k));
  }
  if (names.empty()) names.push_back("dummy");

  std::ostringstream out;
  out.precision(17);
  out << "\\ objective level " << level + 1 << " of " << lp.levels.size() << "\n";
  out << "Minimize\n obj:";
  if (level < lp.levels.size()) {
    LinExpr obj = lp.levels[level];
    obj.normalize();
    write_terms(out, obj.terms, names);
    if (obj.constant != 0.0) out << (obj.constant < 0 ? " - " : " + ") << std::abs(obj.constant);
  } else {
    out << " 0 " << names.front();
  }
  out << "\nSubject To\n";
  int last_group = -1;
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& row = lp.rows[r];
    if (row.group != last_group) {
      out << "\\ group: " << lp.groups[row.group] << "\n";
      last_group = row.group;
    }
    out << " c" << r << ":";
    write_terms(out, row.terms, names);
    out << (row.sense == Sense::LE ? " <= " : row.sense == Sense::GE ? " >= " : " = ") << row.rhs
        << "\n";
  }
  out << "Bounds\n";
  for (std::size_t i = 0; i < lp.vars.size(); ++i) {
    const auto& v = lp.vars[i];
    if (v.kind == VarKind::Binary && v.lb == 0.0 && v.ub == 1.0) continue;
    if (v.lb == -kInf && v.ub == kInf) {
      out << " " << names[i] << " free\n";
    } else if (v.ub == kInf) {
      out << " " << names[i] << " >= " << v.lb << "\n";
    } else {
      out << " " << v.lb << " <= " << names[i] << " <= " << v.ub << "\n";
    }
  }
  std::ostringstream gen, bin;
  for (std::size_t i = 0; i < lp.vars.size(); ++i) {
    if (lp.vars[i].kind == VarKind::Integer) gen << " " << names[i] << "\n";
    if (lp.vars[i].kind == VarKind::Binary) bin << " " << names[i] << "\n";
  }
  if (!gen.str().empty()) out << "General\n" << gen.str();
  if (!bin.str().empty()) out << "Binary\n" << bin.str();
  out << "End\n";
  return out.str();
}

}  // namespace fusched::milp
