#include "fusched/gantt.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace fusched {

namespace {

constexpr double kLeft = 70.0;
constexpr double kWidth = 1200.0;
constexpr double kTop = 30.0;
constexpr double kLane = 44.0;
constexpr double kBar = 26.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string color(std::size_t task) {
  const int hue = static_cast<int>((task * 137) % 360);
  return "hsl(" + std::to_string(hue) + ",55%,70%)";
}

}  // namespace

std::string emit_gantt(const Schedule& s, const std::vector<TraceEvent>& trace,
                       const std::vector<TaskType>& types) {
  Tick horizon = s.delta;
  for (const auto& row : s.inst) {
    for (const auto& a : row) horizon = std::max(horizon, a.finish);
  }
  const double scale = horizon > 0 ? kWidth / static_cast<double>(horizon) : 1.0;
  auto x = [&](Tick t) { return kLeft + static_cast<double>(t) * scale; };
  const int lanes = std::max(0, s.core_count);
  const double height = kTop + lanes * kLane + 30.0;

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kLeft + kWidth + 20)
    << "\" height=\"" << num(height) << "\" font-family=\"monospace\" font-size=\"10\">\n";
  o << "<defs><marker id=\"arrow\" markerWidth=\"6\" markerHeight=\"6\" refX=\"3\" refY=\"6\" "
       "orient=\"auto\"><path d=\"M0,0 L6,0 L3,6 z\" fill=\"#333\"/></marker></defs>\n";
  for (int c = 0; c < lanes; ++c) {
    const double y = kTop + c * kLane;
    o << "<text x=\"4\" y=\"" << num(y + kLane / 2 + 3) << "\">core " << c << "</text>\n";
    o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(y) << "\" width=\"" << num(kWidth)
      << "\" height=\"" << num(kLane) << "\" fill=\"none\" stroke=\"#ccc\"/>\n";
  }
  if (s.hp > 0) {
    for (Tick t = 0; t <= horizon; t += s.hp) {
      o << "<line x1=\"" << num(x(t)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x(t))
        << "\" y2=\"" << num(kTop + lanes * kLane) << "\" stroke=\"#999\" stroke-dasharray=\"4,3\"/>\n";
      o << "<text x=\"" << num(x(t)) << "\" y=\"" << num(kTop + lanes * kLane + 14)
        << "\" text-anchor=\"middle\">" << t << "</text>\n";
    }
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < s.task_ids.size(); ++i) index[s.task_ids[i]] = i;
  for (std::size_t i = 0; i < s.inst.size(); ++i) {
    for (std::size_t j = 0; j < s.inst[i].size(); ++j) {
      const auto& a = s.inst[i][j];
      const double y = kTop + a.core * kLane + (kLane - kBar) / 2;
      const std::string label = escape(s.task_ids[i]) + "." + std::to_string(j + 1);
      o << "<g><title>" << label << " [" << a.start << ", " << a.finish << ")</title>";
      o << "<rect x=\"" << num(x(a.start)) << "\" y=\"" << num(y) << "\" width=\""
        << num(static_cast<double>(a.finish - a.start) * scale) << "\" height=\"" << num(kBar)
        << "\" fill=\"" << color(i) << "\" stroke=\"#333\" stroke-width=\"0.5\"/>";
      o << "<text x=\"" << num(x(a.start) + 1) << "\" y=\"" << num(y + kBar / 2 + 3) << "\">"
        << label << "</text></g>\n";
    }
  }
  for (const auto& e : trace) {
    if (e.event != "trigger") continue;
    const auto it = index.find(e.task);
    if (it == index.end()) continue;
    if (!types.empty() && !is_fusion(types[it->second])) continue;
    const double y = kTop + e.core * kLane + (kLane - kBar) / 2;
    o << "<line x1=\"" << num(x(e.time)) << "\" y1=\"" << num(y - 9) << "\" x2=\"" << num(x(e.time))
      << "\" y2=\"" << num(y - 1) << "\" stroke=\"#333\" marker-end=\"url(#arrow)\"><title>"
      << escape(e.task) << "." << e.instance << " trigger</title></line>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace fusched
