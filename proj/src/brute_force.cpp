#include "fusched/brute_force.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace fusched {

namespace {

constexpr Tick kNone = std::numeric_limits<Tick>::min() / 4;

/// All-pairs longest paths of a difference-constraint system:
/// d(a, b) = w means s_b >= s_a + w holds in every solution. Node 0 is time 0.
class Distances {
 public:
  explicit Distances(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, kNone) {
    for (int i = 0; i < n; ++i) at(i, i) = 0;
  }
  Tick get(int a, int b) const { return d_[static_cast<std::size_t>(a) * n_ + b]; }
  bool implies(int a, int b, Tick w) const { return get(a, b) != kNone && get(a, b) >= w; }

  /// Adds s_b >= s_a + w. Returns false (leaving the matrix unusable) on a positive cycle.
  bool add(int a, int b, Tick w) {
    if (get(b, a) != kNone && get(b, a) + w > 0) return false;
    if (implies(a, b, w)) return true;
    std::vector<Tick> into(n_), from(n_);
    for (int x = 0; x < n_; ++x) into[x] = get(x, a);
    for (int y = 0; y < n_; ++y) from[y] = get(b, y);
    for (int x = 0; x < n_; ++x) {
      if (into[x] == kNone) continue;
      Tick* row = &d_[static_cast<std::size_t>(x) * n_];
      for (int y = 0; y < n_; ++y) {
        if (from[y] == kNone) continue;
        row[y] = std::max(row[y], into[x] + w + from[y]);
      }
    }
    return true;
  }

 private:
  Tick& at(int a, int b) { return d_[static_cast<std::size_t>(a) * n_ + b]; }
  int n_;
  std::vector<Tick> d_;
};

bool better(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double tol = 1e-9 * std::max(1.0, std::abs(b[k]));
    if (a[k] < b[k] - tol) return true;
    if (a[k] > b[k] + tol) return false;
  }
  return false;
}

class Search {
 public:
  Search(const Problem& p, const MetricConfig& mc, const BruteLimits& lim)
      : p_(p), tb_(p.table), mc_(mc), lim_(lim), t0_(std::chrono::steady_clock::now()) {
    const int n = p.task_count();
    node_.resize(n);
    int next = 1;
    for (int i = 0; i < n; ++i) {
      for (int j = 1; j <= tb_.n[i]; ++j) {
        node_[i].push_back(next++);
        owner_.push_back({i, j});
      }
    }
    nodes_ = next;
    used_.resize(n);
    for (int i = 0; i < n; ++i) used_[i].assign(tb_.n[i], {});
    for (int i : p.graph.topo) {
      if (!is_fusion(p.task(i).type)) continue;
      for (int j = 1; j <= tb_.last_in_phase(i, 2); ++j) a_steps_.push_back({i, j});
    }
    origin_.assign(nodes_, 0);
    for (int x = 1; x < nodes_; ++x) {
      const auto [i, j] = owner_[x - 1];
      const int q = tb_.phase(i, j);
      origin_[x] = q >= 3 ? nd(i, j - (q - 2) * tb_.steady[i]) : x;
    }
    core_of_.assign(nodes_, p.dag.core_count == 1 ? 0 : -1);
    sinks_ = evaluated_sinks(p.dag, p.graph, mc);
    paoi_weighted_ = std::any_of(mc.objective.begin(), mc.objective.end(), [](const auto& w) {
      return w.metric == Metric::PAoI && w.weight > 0.0;
    });
  }

  BruteResult run() {
    BruteResult res;
    Distances d(nodes_);
    if (static_constraints(d)) a_step(d, 0);
    res.nodes = visited_;
    const bool timed_out = timed_out_;
    if (best_) {
      res.outcome.status = timed_out ? SolveStatus::FeasibleTimeout : SolveStatus::Optimal;
      res.outcome.objective = best_levels_;
      res.metrics = best_metrics_;
      const auto check = validate_schedule(*best_, p_);
      if (!check.ok()) {
        res.outcome.status = SolveStatus::Error;
        res.outcome.message = "oracle schedule fails validation: " + check.violations.front();
      }
      res.schedule = std::move(best_);
    } else {
      res.outcome.status = timed_out ? SolveStatus::Timeout : SolveStatus::Infeasible;
    }
    res.outcome.wall_time = elapsed();
    return res;
  }

 private:
  struct Ref {
    int task, j;
  };

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

  bool tick() {
    if ((++visited_ & 1023) == 0 && elapsed() > lim_.time_limit) timed_out_ = true;
    return !timed_out_;
  }

  int nd(int i, int j) const { return node_[i][j - 1]; }
  Tick wcet(int i) const { return p_.task(i).wcet; }

  bool static_constraints(Distances& d) {
    const auto& g = p_.graph;
    for (int i = 0; i < p_.task_count(); ++i) {
      const auto& t = p_.task(i);
      const Tick D = p_.deadline(i);
      for (int j = 1; j <= tb_.n[i]; ++j) {
        const int x = nd(i, j);
        bool ok = d.add(0, x, 0);
        if (is_timer(t.type)) {
          const Tick r = t.period * (j - 1);
          ok = ok && d.add(0, x, r) && d.add(x, 0, -(r + D - t.wcet));
        }
        if (j > 1) ok = ok && d.add(nd(i, j - 1), x, t.wcet);
        if (t.type == TaskType::Subscription) {
          const int pi = g.preds[i][0];
          ok = ok && d.add(nd(pi, j), x, wcet(pi)) && d.add(x, nd(pi, j), t.wcet - wcet(pi) - D);
        }
        const int q = tb_.phase(i, j);
        if (q >= 3) {
          const int j0 = j - (q - 2) * tb_.steady[i];
          const Tick shift = (q - 2) * tb_.hp;
          ok = ok && d.add(nd(i, j0), x, shift) && d.add(x, nd(i, j0), -shift);
        }
        if (!ok) return false;
      }
    }
    return true;
  }

  /// Input rules between consecutive instances a and a + 1 of fusion task i.
  bool consecutive_ok(int i, int a) const {
    const auto& u0 = used_[i][a - 1];
    const auto& u1 = used_[i][a];
    if (u0.empty() || u1.empty()) return true;
    int advance = 0;
    for (std::size_t e = 0; e < u0.size(); ++e) {
      if (u1[e] < u0[e]) return false;
      if (p_.task(i).type == TaskType::WFusion && u1[e] == u0[e]) return false;
      advance += u1[e] - u0[e];
    }
    return p_.task(i).type != TaskType::IFusion || advance >= 1;
  }

  void enumerate_tuples(int i, int j, std::size_t e, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out) const {
    const auto& preds = p_.graph.preds[i];
    if (e == preds.size()) {
      if (p_.task(i).type == TaskType::IFusion) {
        int room = 0;
        for (std::size_t k = 0; k < preds.size(); ++k) room += tb_.n[preds[k]] - cur[k];
        if (room < tb_.n[i] - j) return;
      }
      out.push_back(cur);
      return;
    }
    const int n_e = tb_.n[preds[e]];
    int lo = 1;
    int hi = n_e;
    if (j > 1) lo = used_[i][j - 2][e] + (p_.task(i).type == TaskType::WFusion ? 1 : 0);
    if (p_.task(i).type == TaskType::WFusion) hi = n_e - (tb_.n[i] - j);
    for (int v = lo; v <= hi; ++v) {
      cur[e] = v;
      enumerate_tuples(i, j, e + 1, cur, out);
    }
  }

  void a_step(const Distances& d, std::size_t k) {
    if (!tick()) return;
    if (k == a_steps_.size()) {
      after_inputs(d);
      return;
    }
    const auto [i, j] = a_steps_[k];
    const auto& preds = p_.graph.preds[i];
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur(preds.size());
    enumerate_tuples(i, j, 0, cur, tuples);
    const bool steady = tb_.phase(i, j) == 2;
    for (const auto& tup : tuples) {
      std::vector<int> assigned;
      bool ok = true;
      for (int q = 2; q <= (steady ? tb_.k : 2) && ok; ++q) {
        const int jj = j + (q - 2) * tb_.steady[i];
        std::vector<int> u = tup;
        for (std::size_t e = 0; e < preds.size(); ++e) {
          u[e] += (q - 2) * tb_.steady[preds[e]];
          if (u[e] > tb_.n[preds[e]]) ok = false;
        }
        used_[i][jj - 1] = u;
        assigned.push_back(jj);
      }
      for (int jj : assigned) {
        if (!ok) break;
        if (jj > 1 && !consecutive_ok(i, jj - 1)) ok = false;
        if (jj < tb_.n[i] && !consecutive_ok(i, jj)) ok = false;
      }
      if (ok) {
        Distances next = d;
        for (int jj : assigned) {
          for (std::size_t e = 0; e < preds.size() && ok; ++e) {
            ok = next.add(nd(preds[e], used_[i][jj - 1][e]), nd(i, jj), wcet(preds[e]));
          }
        }
        if (ok) a_step(next, k + 1);
      }
      for (int jj : assigned) used_[i][jj - 1].clear();
      if (timed_out_) return;
    }
  }

  /// Inputs are fixed: provenance, disparity and the bound data are now known.
  void after_inputs(const Distances& d) {
    Schedule shape = blank();
    prov_ = provenance_sets(shape, p_);
    paoi_pairs_.assign(sinks_.size(), {});
    for (std::size_t k = 0; k < sinks_.size(); ++k) {
      const int s = sinks_[k];
      auto& pairs = paoi_pairs_[k];
      for (int j = tb_.first_in_phase(s, 2); j <= tb_.n[s]; ++j) {
        for (const auto& [sen, js] : prov_[s][j - 1]) {
          if (js >= 2) pairs.push_back({nd(sen, js - 1), nd(sen, js)});
        }
      }
      std::sort(pairs.begin(), pairs.end());
      pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    }
    witnesses_.clear();
    for (int i : p_.graph.topo) {
      const auto type = p_.task(i).type;
      if (type != TaskType::WFusion && type != TaskType::IFusion) continue;
      for (int j = 1; j <= tb_.n[i]; ++j) witnesses_.push_back(witness_options(i, j));
    }
    resolve(d, p_.dag.core_count == 1 ? 0 : -1);
  }

  struct Witness {
    int x = 0;
    std::vector<std::pair<int, Tick>> options;  ///< s_pn >= s_x + w
  };

  /// Deadline of an event fusion instance holds against at least one input.
  Witness witness_options(int i, int j) const {
    Witness wt;
    wt.x = nd(i, j);
    const auto& preds = p_.graph.preds[i];
    const auto& u = used_[i][j - 1];
    for (std::size_t e = 0; e < preds.size(); ++e) {
      int jp = u[e];
      if (p_.task(i).type == TaskType::IFusion) {
        if (j == 1) {
          jp = 1;
        } else if (u[e] == used_[i][j - 2][e]) {
          continue;
        }
      }
      wt.options.push_back({nd(preds[e], jp), wcet(i) - wcet(preds[e]) - p_.deadline(i)});
    }
    return wt;
  }

  /// Branches on the first rule broken by the least solution of `d`; a
  /// least solution that breaks nothing is a schedule.
  void resolve(const Distances& d, int max_core) {
    if (!tick()) return;
    if (bound_exceeds(d)) return;
    auto least = [&](int x) { return d.get(0, x); };
    for (const auto& wt : witnesses_) {
      const bool held = std::any_of(wt.options.begin(), wt.options.end(), [&](const auto& o) {
        return least(o.first) >= least(wt.x) + o.second;
      });
      if (held) continue;
      for (const auto& [pn, w] : wt.options) {
        Distances next = d;
        if (next.add(wt.x, pn, w)) resolve(next, max_core);
        if (timed_out_) return;
      }
      return;
    }
    // Earliest pair of instances that overlap and may share a core.
    int ba = 0, bb = 0;
    Tick first = std::numeric_limits<Tick>::max();
    for (int a = 1; a < nodes_; ++a) {
      const Tick sa = least(a), fa = sa + node_wcet(a);
      if (sa >= first) continue;
      for (int b = 1; b < nodes_; ++b) {
        if (b == a) continue;
        const Tick sb = least(b);
        if (sb < sa || (sb == sa && b < a) || sb >= fa) continue;
        const int ca = core_of_[origin_[a]], cb = core_of_[origin_[b]];
        if (ca >= 0 && cb >= 0 && ca != cb) continue;
        first = sa;
        ba = a;
        bb = b;
        break;
      }
    }
    if (ba == 0) {
      leaf(d, max_core);
      return;
    }
    const int oa = origin_[ba], ob = origin_[bb];
    if (core_of_[oa] < 0 || core_of_[ob] < 0) {
      const int x = core_of_[oa] < 0 ? oa : ob;
      const int top = std::min(p_.dag.core_count - 1, max_core + 1);
      for (int c = 0; c <= top; ++c) {
        core_of_[x] = c;
        resolve(d, std::max(max_core, c));
        core_of_[x] = -1;
        if (timed_out_) return;
      }
      return;
    }
    for (int flip = 0; flip < 2; ++flip) {
      Distances next = d;
      const bool ok = flip == 0 ? next.add(ba, bb, node_wcet(ba)) : next.add(bb, ba, node_wcet(bb));
      if (ok) resolve(next, max_core);
      if (timed_out_) return;
    }
  }

  Tick node_wcet(int x) const { return wcet(owner_[x - 1].task); }

  /// The least solution is a schedule. Better ones must lower a sensor gap.
  void leaf(const Distances& d, int max_core) {
    consider(d);
    if (!paoi_weighted_) return;
    for (std::size_t k = 0; k < sinks_.size(); ++k) {
      const Tick cap = gap_of_least(d, k) - lim_.grid;
      if (cap < forced_gap(d, k)) continue;
      Distances next = d;
      bool ok = true;
      for (const auto& [a, b] : paoi_pairs_[k]) {
        if (!(ok = next.add(b, a, -cap))) break;
      }
      if (ok) resolve(next, max_core);
      if (timed_out_) return;
    }
  }

  Schedule blank() const {
    Schedule s;
    s.hp = tb_.hp;
    s.delta = tb_.delta;
    s.core_count = p_.dag.core_count;
    for (int i = 0; i < p_.task_count(); ++i) {
      s.task_ids.push_back(p_.task(i).id);
      std::vector<ScheduledInstance> row(tb_.n[i]);
      for (int j = 1; j <= tb_.n[i]; ++j) {
        row[j - 1].phase = tb_.phase(i, j);
        row[j - 1].core = std::max(0, core_of_[origin_[nd(i, j)]]);
        row[j - 1].used = used_[i][j - 1];
      }
      s.inst.push_back(std::move(row));
    }
    return s;
  }

  /// Lower bound of every objective level from the earliest starts and
  /// the forced start gaps; prunes when it cannot beat the incumbent.
  bool bound_exceeds(const Distances& d) const {
    if (!best_ && lim_.cutoff.empty()) return false;
    MetricsReport lb;
    for (int s : sinks_) {
      SinkMetrics m;
      m.sink = p_.task(s).id;
      const auto wsens = wcrt_sensors_for(p_.dag, p_.graph, s, mc_);
      for (int sen : wsens) m.wcrt[p_.task(sen).id] = 0;
      for (int j = tb_.first_in_phase(s, 2); j <= tb_.n[s]; ++j) {
        const Tick f = d.get(0, nd(s, j)) + wcet(s);
        m.ms = std::max(m.ms, f);
        const auto& pr = prov_[s][j - 1];
        if (j >= 2 && !prov_[s][j - 2].empty()) {
          Tick ots = std::numeric_limits<Tick>::max();
          for (const auto& [sen, js] : prov_[s][j - 2]) ots = std::min(ots, p_.task(sen).period * (js - 1));
          m.mrt = std::max(m.mrt, f - ots);
        }
        if (!pr.empty()) {
          Tick lo = std::numeric_limits<Tick>::max(), hi = 0;
          for (const auto& [sen, js] : pr) {
            const Tick r = p_.task(sen).period * (js - 1);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            if (std::find(wsens.begin(), wsens.end(), sen) != wsens.end()) {
              auto& w = m.wcrt[p_.task(sen).id];
              w = std::max(w, f - r);
            }
          }
          m.mtd = std::max(m.mtd, hi - lo);
        }
      }
      lb.sinks.push_back(std::move(m));
    }
    for (std::size_t k = 0; k < sinks_.size(); ++k) lb.sinks[k].paoi = forced_gap(d, k);
    return worse_than_target(objective_levels(lb, mc_));
  }

  bool worse_than_target(const std::vector<double>& levels) const {
    if (best_) return !better(levels, best_levels_);
    return !lim_.cutoff.empty() && better(lim_.cutoff, levels);
  }

  void consider(const Distances& d) {
    Schedule s = blank();
    for (int x = 1; x < nodes_; ++x) {
      const auto [i, j] = owner_[x - 1];
      s.inst[i][j - 1].start = d.get(0, x);
      s.inst[i][j - 1].finish = d.get(0, x) + wcet(i);
    }
    MetricsReport rep = eval_metrics(s, p_, mc_);
    if (!worse_than_target(rep.levels) && (!best_ || better(rep.levels, best_levels_))) {
      best_levels_ = rep.levels;
      best_metrics_ = std::move(rep);
      best_ = std::move(s);
    }
  }

  Tick gap_of_least(const Distances& d, std::size_t k) const {
    Tick gap = 0;
    for (const auto& [a, b] : paoi_pairs_[k]) gap = std::max(gap, d.get(0, b) - d.get(0, a));
    return gap;
  }

  Tick forced_gap(const Distances& d, std::size_t k) const {
    Tick gap = 0;
    for (const auto& [a, b] : paoi_pairs_[k]) gap = std::max(gap, d.get(a, b));
    return gap;
  }

  const Problem& p_;
  const InstanceTable& tb_;
  const MetricConfig& mc_;
  BruteLimits lim_;
  std::chrono::steady_clock::time_point t0_;
  std::vector<std::vector<int>> node_;
  std::vector<Ref> owner_;
  int nodes_ = 0;
  std::vector<std::vector<std::vector<int>>> used_;
  std::vector<int> origin_;   ///< node of the phase 1-2 instance a copy repeats
  std::vector<int> core_of_;  ///< per origin node, -1 while open
  std::vector<Ref> a_steps_;
  std::vector<Witness> witnesses_;
  std::vector<int> sinks_;
  bool paoi_weighted_ = false;
  std::vector<std::vector<std::vector<std::pair<int, int>>>> prov_;
  std::vector<std::vector<std::pair<int, int>>> paoi_pairs_;  ///< per evaluated sink
  std::optional<Schedule> best_;
  std::vector<double> best_levels_;
  MetricsReport best_metrics_;
  std::uint64_t visited_ = 0;
  bool timed_out_ = false;
};

void check_grid(const Problem& p, Tick grid) {
  if (grid < 1) throw InputError("grid must be at least 1");
  for (int i = 0; i < p.task_count(); ++i) {
    const auto& t = p.task(i);
    if (t.wcet % grid != 0 || t.period % grid != 0 || p.deadline(i) % grid != 0) {
      throw InputError("task " + t.id + " has durations that are not multiples of the grid");
    }
  }
}

}  // namespace

BruteResult brute_force_solve(const Problem& problem, const MetricConfig& metrics,
                              const BruteLimits& limits) {
  const int total = problem.table.total_instances();
  if (total > limits.max_instances) {
    throw InputError("brute force: " + std::to_string(total) + " instances exceed the cap of " +
                     std::to_string(limits.max_instances));
  }
  if (problem.table.delta > limits.max_delta) {
    throw InputError("brute force: window " + std::to_string(problem.table.delta) +
                     " exceeds the cap of " + std::to_string(limits.max_delta));
  }
  check_grid(problem, limits.grid);
  return Search(problem, metrics, limits).run();
}

}  // namespace fusched
