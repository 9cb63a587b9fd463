#include "fusched/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace fusched {

int Schedule::instance_count() const {
  int n = 0;
  for (const auto& v : inst) n += static_cast<int>(v.size());
  return n;
}

const SinkMetrics* MetricsReport::find(const std::string& sink) const {
  for (const auto& s : sinks) {
    if (s.sink == sink) return &s;
  }
  return nullptr;
}

namespace {

std::string where(const Problem& p, int i, int j) {
  return p.task(i).id + "#" + std::to_string(j);
}

Tick integral(double v, const std::string& what) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-6) throw ModelError("non-integral value for " + what);
  return static_cast<Tick>(r);
}

/// Provenance: for each (task, instance) the sorted (sensor, instance) pairs
/// whose data reached it, following reads[i][j][e] (1-based pred instance).
using Prov = std::vector<std::vector<std::vector<std::pair<int, int>>>>;

Prov propagate(const Problem& p, const std::vector<std::vector<std::vector<int>>>& reads,
               const std::vector<int>& counts) {
  Prov prov(p.task_count());
  for (int i : p.graph.topo) {
    prov[i].resize(counts[i]);
    for (int j = 0; j < counts[i]; ++j) {
      auto& out = prov[i][j];
      if (p.task(i).type == TaskType::Sensor) {
        out.emplace_back(i, j + 1);
        continue;
      }
      const auto& preds = p.graph.preds[i];
      for (std::size_t e = 0; e < preds.size(); ++e) {
        const int jp = reads[i][j][e];
        if (jp < 1 || jp > counts[preds[e]]) continue;
        const auto& src = prov[preds[e]][jp - 1];
        out.insert(out.end(), src.begin(), src.end());
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }
  return prov;
}

/// Metrics of every evaluated sink over instances [first_eval[sink], count].
MetricsReport measure(const Problem& p, const MetricConfig& mc,
                      const std::vector<std::vector<ScheduledInstance>>& inst, const Prov& prov,
                      const std::vector<int>& first_eval) {
  MetricsReport rep;
  auto release = [&](int s, int js) { return p.task(s).period * (js - 1); };
  for (int sink : evaluated_sinks(p.dag, p.graph, mc)) {
    SinkMetrics m;
    m.sink = p.task(sink).id;
    const int n = static_cast<int>(inst[sink].size());
    const int first = first_eval[sink];
    auto ots = [&](int j) {
      Tick v = std::numeric_limits<Tick>::max();
      for (const auto& [s, js] : prov[sink][j - 1]) v = std::min(v, release(s, js));
      return prov[sink][j - 1].empty() ? Tick(0) : v;
    };
    auto nts = [&](int j) {
      Tick v = 0;
      for (const auto& [s, js] : prov[sink][j - 1]) v = std::max(v, release(s, js));
      return v;
    };
    const auto wsens = wcrt_sensors_for(p.dag, p.graph, sink, mc);
    for (int s : wsens) m.wcrt[p.task(s).id] = 0;
    for (int j = first; j <= n; ++j) {
      const Tick f = inst[sink][j - 1].finish;
      if (j >= 2) m.mrt = std::max(m.mrt, f - ots(j - 1));
      m.mtd = std::max(m.mtd, nts(j) - ots(j));
      // Replayed copies beyond the window are folded back into it.
      const int extra = std::max(0, inst[sink][j - 1].phase - p.table.k);
      m.ms = std::max(m.ms, f - extra * p.table.hp);
      for (const auto& [s, js] : prov[sink][j - 1]) {
        if (js >= 2) {
          m.paoi = std::max(m.paoi, inst[s][js - 1].start - inst[s][js - 2].start);
        }
        if (std::find(wsens.begin(), wsens.end(), s) != wsens.end()) {
          auto& w = m.wcrt[p.task(s).id];
          w = std::max(w, f - release(s, js));
        }
      }
    }
    rep.sinks.push_back(std::move(m));
  }
  rep.levels = objective_levels(rep, mc);
  return rep;
}

}  // namespace

Schedule extract_schedule(const SolveOutcome& outcome, const IlpModel& model,
                          const Problem& problem) {
  if (!has_solution(outcome.status)) {
    throw ModelError("no schedule to extract: solve status " +
                     std::string(to_string(outcome.status)));
  }
  const auto& x = outcome.assignment;
  const auto& tb = problem.table;
  Schedule sch;
  sch.hp = tb.hp;
  sch.delta = tb.delta;
  sch.core_count = problem.dag.core_count;
  for (int i = 0; i < problem.task_count(); ++i) {
    sch.task_ids.push_back(problem.task(i).id);
    std::vector<ScheduledInstance> row;
    for (int j = 0; j < tb.n[i]; ++j) {
      ScheduledInstance si;
      si.start = integral(x[model.s[i][j]], "start of " + where(problem, i, j + 1));
      si.finish = integral(x[model.f[i][j]], "finish of " + where(problem, i, j + 1));
      si.phase = tb.phase(i, j + 1);
      int chosen = -1;
      for (std::size_t c = 0; c < model.y[i][j].size(); ++c) {
        if (integral(x[model.y[i][j][c]], "core of " + where(problem, i, j + 1)) == 1) {
          if (chosen >= 0) throw ModelError("two cores for " + where(problem, i, j + 1));
          chosen = static_cast<int>(c);
        }
      }
      if (chosen < 0) throw ModelError("no core for " + where(problem, i, j + 1));
      si.core = chosen;
      if (is_fusion(problem.task(i).type)) {
        for (const auto& edge : model.u[i][j]) {
          int used = -1;
          for (const auto& [jp, lit] : edge) {
            if (integral(lit.eval(x), "input of " + where(problem, i, j + 1)) == 1) {
              if (used >= 0) throw ModelError("two inputs on one edge of " + where(problem, i, j + 1));
              used = jp;
            }
          }
          if (used < 0) throw ModelError("no input on an edge of " + where(problem, i, j + 1));
          si.used.push_back(used);
        }
      }
      row.push_back(std::move(si));
    }
    sch.inst.push_back(std::move(row));
  }
  return sch;
}

ScheduleCheck validate_schedule(const Schedule& sch, const Problem& p) {
  ScheduleCheck out;
  auto bad = [&out](std::string s) { out.violations.push_back(std::move(s)); };
  const auto& tb = p.table;
  const auto& g = p.graph;
  const int n = p.task_count();
  if (static_cast<int>(sch.inst.size()) != n) {
    bad("schedule has " + std::to_string(sch.inst.size()) + " tasks, expected " +
        std::to_string(n));
    return out;
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(sch.inst[i].size()) != tb.n[i]) {
      bad(p.task(i).id + ": " + std::to_string(sch.inst[i].size()) + " instances, expected " +
          std::to_string(tb.n[i]));
      return out;
    }
  }

  for (int i = 0; i < n; ++i) {
    const auto& t = p.task(i);
    const Tick D = p.deadline(i);
    const auto& preds = g.preds[i];
    for (int j = 1; j <= tb.n[i]; ++j) {
      const auto& a = sch.at(i, j);
      const std::string w = where(p, i, j);
      if (a.finish - a.start != t.wcet) bad(w + ": finish - start != wcet");
      if (a.start < 0) bad(w + ": negative start");
      if (a.core < 0 || a.core >= p.dag.core_count) bad(w + ": core out of range");
      if (a.phase != tb.phase(i, j)) bad(w + ": wrong phase label");
      if (j > 1 && a.start < sch.at(i, j - 1).finish) bad(w + ": starts before previous instance finishes");

      if (is_timer(t.type)) {
        const Tick r = t.period * (j - 1);
        if (a.start < r) bad(w + ": starts before its release");
        if (a.finish > r + D) bad(w + ": misses its deadline");
      } else if (t.type == TaskType::Subscription) {
        const auto& pr = sch.at(preds[0], j);
        if (a.start < pr.finish) bad(w + ": starts before its input finishes");
        if (a.finish > pr.finish + D) bad(w + ": misses its deadline");
        if (j < tb.n[preds[0]] && sch.at(preds[0], j + 1).finish <= a.start) {
          out.warnings.push_back(w + ": newer input was available at start");
        }
      }

      if (is_fusion(t.type)) {
        if (a.used.size() != preds.size()) {
          bad(w + ": expected one input per incoming edge");
          continue;
        }
        bool inputs_ok = true;
        for (std::size_t e = 0; e < preds.size(); ++e) {
          const int jp = a.used[e];
          if (jp < 1 || jp > tb.n[preds[e]]) {
            bad(w + ": input index out of range");
            inputs_ok = false;
            continue;
          }
          const auto& in = sch.at(preds[e], jp);
          if (a.start < in.finish) bad(w + ": starts before a used input finishes");
          int latest = 0;
          for (int k = 1; k <= tb.n[preds[e]]; ++k) {
            if (sch.at(preds[e], k).finish <= a.start) latest = k;
          }
          if (latest != jp) {
            out.warnings.push_back(w + ": uses " + p.task(preds[e]).id + "#" + std::to_string(jp) +
                                   " while #" + std::to_string(latest) + " is the newest");
          }
        }
        if (!inputs_ok) continue;
        if (j > 1) {
          const auto& prev = sch.at(i, j - 1);
          int advance = 0;
          for (std::size_t e = 0; e < preds.size(); ++e) {
            if (a.used[e] < prev.used[e]) bad(w + ": uses an older input than its predecessor instance");
            advance += a.used[e] - prev.used[e];
          }
          if (t.type == TaskType::IFusion && advance < 1) bad(w + ": no fresh input");
        }
        if (!is_timer(t.type)) {
          bool met = false;
          for (std::size_t e = 0; e < preds.size(); ++e) {
            Tick rel = 0;
            if (t.type == TaskType::WFusion) {
              for (std::size_t o = 0; o < preds.size(); ++o) {
                rel = std::max(rel, sch.at(preds[o], a.used[o]).finish);
              }
            } else if (j == 1) {
              for (int pe : preds) rel = std::max(rel, sch.at(pe, 1).finish);
            } else {
              if (a.used[e] == sch.at(i, j - 1).used[e]) continue;
              rel = sch.at(preds[e], a.used[e]).finish;
            }
            if (a.finish <= rel + D) met = true;
          }
          if (!met) bad(w + ": misses its deadline");
        }
      }

      const int q = tb.phase(i, j);
      if (q >= 3) {
        const int j0 = j - (q - 2) * tb.steady[i];
        const Tick shift = (q - 2) * tb.hp;
        const auto& o = sch.at(i, j0);
        if (a.start != o.start + shift || a.core != o.core) bad(w + ": not a copy of the steady hyperperiod");
        if (is_fusion(t.type) && a.used.size() == o.used.size()) {
          for (std::size_t e = 0; e < preds.size(); ++e) {
            if (a.used[e] != o.used[e] + (q - 2) * tb.steady[preds[e]]) {
              bad(w + ": inputs are not a copy of the steady hyperperiod");
            }
          }
        }
      }
    }
    if (t.type == TaskType::WFusion) {
      for (std::size_t e = 0; e < preds.size(); ++e) {
        std::set<int> seen;
        for (int j = 1; j <= tb.n[i]; ++j) {
          const auto& u = sch.at(i, j).used;
          if (e < u.size() && !seen.insert(u[e]).second) {
            bad(where(p, i, j) + ": input " + p.task(preds[e]).id + "#" + std::to_string(u[e]) +
                " used twice");
          }
        }
      }
    }
  }

  std::vector<std::vector<std::pair<Tick, std::pair<int, int>>>> lanes(sch.core_count);
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j <= tb.n[i]; ++j) {
      const auto& a = sch.at(i, j);
      if (a.core >= 0 && a.core < sch.core_count) lanes[a.core].push_back({a.start, {i, j}});
    }
  }
  for (auto& lane : lanes) {
    std::sort(lane.begin(), lane.end());
    for (std::size_t k = 1; k < lane.size(); ++k) {
      auto [i0, j0] = lane[k - 1].second;
      auto [i1, j1] = lane[k].second;
      if (sch.at(i0, j0).finish > sch.at(i1, j1).start) {
        bad(where(p, i0, j0) + " overlaps " + where(p, i1, j1));
      }
    }
  }
  return out;
}

std::vector<double> objective_levels(const MetricsReport& rep, const MetricConfig& mc) {
  std::vector<int> prios;
  for (const auto& w : mc.objective) prios.push_back(w.priority);
  std::sort(prios.begin(), prios.end(), std::greater<>());
  prios.erase(std::unique(prios.begin(), prios.end()), prios.end());
  std::vector<double> out;
  for (int prio : prios) {
    double v = 0.0;
    for (const auto& w : mc.objective) {
      if (w.priority != prio) continue;
      for (const auto& s : rep.sinks) {
        switch (w.metric) {
          case Metric::MRT: v += w.weight * static_cast<double>(s.mrt); break;
          case Metric::MTD: v += w.weight * static_cast<double>(s.mtd); break;
          case Metric::PAoI: v += w.weight * static_cast<double>(s.paoi); break;
          case Metric::MS: v += w.weight * static_cast<double>(s.ms); break;
          case Metric::WCRT:
            for (const auto& [id, val] : s.wcrt) v += w.weight * static_cast<double>(val);
            break;
        }
      }
    }
    out.push_back(v);
  }
  return out;
}

namespace {

std::vector<std::vector<std::vector<int>>> decoded_reads(const Schedule& sch, const Problem& p) {
  std::vector<std::vector<std::vector<int>>> reads(p.task_count());
  for (int i = 0; i < p.task_count(); ++i) {
    reads[i].resize(sch.inst[i].size());
    for (std::size_t j = 0; j < sch.inst[i].size(); ++j) {
      const auto type = p.task(i).type;
      if (type == TaskType::Subscription) {
        reads[i][j] = {static_cast<int>(j) + 1};
      } else if (is_fusion(type)) {
        reads[i][j] = sch.inst[i][j].used;
      }
    }
  }
  return reads;
}

std::vector<int> sizes(const Schedule& sch) {
  std::vector<int> out;
  for (const auto& v : sch.inst) out.push_back(static_cast<int>(v.size()));
  return out;
}

}  // namespace

std::vector<std::vector<std::vector<std::pair<int, int>>>> provenance_sets(const Schedule& sch,
                                                                           const Problem& p) {
  return propagate(p, decoded_reads(sch, p), sizes(sch));
}

MetricsReport eval_metrics(const Schedule& sch, const Problem& p, const MetricConfig& mc) {
  std::vector<int> first(p.task_count());
  for (int i = 0; i < p.task_count(); ++i) first[i] = p.table.first_in_phase(i, 2);
  return measure(p, mc, sch.inst, provenance_sets(sch, p), first);
}

namespace {

std::vector<TraceEvent> trace_events(const Problem& p,
                                     const std::vector<std::vector<ScheduledInstance>>& inst,
                                     const std::vector<std::vector<std::vector<int>>>& reads) {
  std::vector<TraceEvent> trace;
  for (int i = 0; i < p.task_count(); ++i) {
    const auto& t = p.task(i);
    for (int j = 0; j < static_cast<int>(inst[i].size()); ++j) {
      const auto& a = inst[i][j];
      Tick trig = 0;
      if (is_timer(t.type)) {
        trig = t.period * j;
      } else {
        const auto& preds = p.graph.preds[i];
        for (std::size_t e = 0; e < preds.size(); ++e) {
          const int r = reads[i][j][e];
          const bool fresh = j == 0 || r != reads[i][j - 1][e];
          if (r >= 1 && (fresh || t.type == TaskType::WFusion)) {
            trig = std::max(trig, inst[preds[e]][r - 1].finish);
          }
        }
      }
      trace.push_back({trig, t.id, j + 1, a.core, "trigger"});
      trace.push_back({a.start, t.id, j + 1, a.core, "start"});
      trace.push_back({a.finish, t.id, j + 1, a.core, "finish"});
    }
  }
  auto rank = [](const std::string& e) { return e == "finish" ? 0 : e == "trigger" ? 1 : 2; };
  std::stable_sort(trace.begin(), trace.end(), [&](const auto& a, const auto& b) {
    return std::tuple(a.time, rank(a.event), a.task, a.instance) <
           std::tuple(b.time, rank(b.event), b.task, b.instance);
  });
  return trace;
}

}  // namespace

ReplayResult replay(const Schedule& sch, const Problem& p, const MetricConfig& mc,
                    int n_hyperperiods) {
  if (n_hyperperiods < 1) throw InputError("replay needs at least one hyperperiod");
  const auto& tb = p.table;
  const int n = p.task_count();
  const int copies = n_hyperperiods + 1;
  ReplayResult res;
  Schedule& tl = res.timeline;
  tl.hp = sch.hp;
  tl.delta = sch.hp * (copies + 1);
  tl.core_count = sch.core_count;
  tl.task_ids = sch.task_ids;
  tl.inst.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j <= tb.counts[i][1]; ++j) tl.inst[i].push_back(sch.at(i, j));
    for (int q = 0; q < copies; ++q) {
      for (int j = tb.first_in_phase(i, 2); j <= tb.last_in_phase(i, 2); ++j) {
        ScheduledInstance c = sch.at(i, j);
        c.start += q * tb.hp;
        c.finish += q * tb.hp;
        c.phase = q + 2;
        tl.inst[i].push_back(c);
      }
    }
  }

  std::vector<int> counts(n), first(n);
  std::vector<std::vector<std::vector<int>>> reads(n);
  for (int i = 0; i < n; ++i) {
    counts[i] = static_cast<int>(tl.inst[i].size());
    first[i] = tb.first_in_phase(i, 2);
    reads[i].resize(counts[i]);
  }
  // Newest finished output of each input at every start.
  for (int i : p.graph.topo) {
    const auto& preds = p.graph.preds[i];
    for (int j = 0; j < counts[i]; ++j) {
      auto& inst = tl.inst[i][j];
      std::vector<int> rd;
      for (int pe : preds) {
        int latest = 0;
        for (int k = 0; k < counts[pe]; ++k) {
          if (tl.inst[pe][k].finish <= inst.start) latest = k + 1;
        }
        rd.push_back(latest);
      }
      reads[i][j] = rd;
      if (is_fusion(p.task(i).type)) inst.used = rd;
    }
  }
  res.metrics = measure(p, mc, tl.inst, propagate(p, reads, counts), first);
  res.trace = trace_events(p, tl.inst, reads);
  return res;
}

std::vector<TraceEvent> schedule_trace(const Schedule& schedule, const Problem& p) {
  std::vector<std::vector<std::vector<int>>> reads(p.task_count());
  for (int i = 0; i < p.task_count(); ++i) {
    for (int j = 0; j < static_cast<int>(schedule.inst[i].size()); ++j) {
      if (is_fusion(p.task(i).type)) {
        reads[i].push_back(schedule.inst[i][j].used);
      } else {
        reads[i].push_back(std::vector<int>(p.graph.preds[i].size(), j + 1));
      }
    }
  }
  return trace_events(p, schedule.inst, reads);
}

std::string format_trace(const std::vector<TraceEvent>& trace) {
  std::ostringstream out;
  for (const auto& e : trace) {
    out << e.time << '\t' << e.task << '\t' << e.instance << '\t' << e.core << '\t' << e.event
        << '\n';
  }
  return out.str();
}

std::string metrics_csv(const MetricsReport& rep) {
  std::ostringstream out;
  out << "sink,sensor,metric,value\n";
  for (const auto& s : rep.sinks) {
    out << s.sink << ",,MRT," << s.mrt << '\n';
    out << s.sink << ",,MTD," << s.mtd << '\n';
    out << s.sink << ",,PAoI," << s.paoi << '\n';
    for (const auto& [sensor, v] : s.wcrt) out << s.sink << ',' << sensor << ",WCRT," << v << '\n';
    out << s.sink << ",,MS," << s.ms << '\n';
  }
  for (std::size_t k = 0; k < rep.levels.size(); ++k) {
    out << ",,objective_level_" << k + 1 << ',' << rep.levels[k] << '\n';
  }
  return out.str();
}

MetricsReport epigraph_values(const IlpModel& model, const Problem& p, const SolveOutcome& outcome,
                              const MetricConfig& mc) {
  MetricsReport rep;
  const auto& x = outcome.assignment;
  auto val = [&](int v) { return v < 0 ? Tick(0) : static_cast<Tick>(std::llround(x[v])); };
  for (const auto& mv : model.metric_vars) {
    SinkMetrics m;
    m.sink = p.task(mv.sink).id;
    m.mrt = val(mv.mrt);
    m.mtd = val(mv.mtd);
    m.paoi = val(mv.paoi);
    m.ms = val(mv.ms);
    for (const auto& [s, v] : mv.wcrt) m.wcrt[p.task(s).id] = val(v);
    rep.sinks.push_back(std::move(m));
  }
  rep.levels = outcome.objective;
  (void)mc;
  return rep;
}

}  // namespace fusched
