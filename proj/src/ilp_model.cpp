#include "fusched/ilp_model.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace fusched {

using milp::LinExpr;
using milp::Sense;

namespace {

constexpr Tick kUnbounded = Tick(1) << 50;

std::string inst_name(const std::string& prefix, const std::string& id, int j) {
  return prefix + "_" + id + "_" + std::to_string(j);
}

}  // namespace

Tick Windows::max_finish(const Problem& p) const {
  Tick m = 0;
  for (int i = 0; i < p.task_count(); ++i) {
    for (Tick l : lst[i]) m = std::max(m, l + p.task(i).wcet);
  }
  return m;
}

Windows compute_windows(const Problem& P) {
  const auto& g = P.graph;
  const auto& tb = P.table;
  const int n = g.size();
  Windows w;
  w.est.resize(n);
  w.lst.resize(n);
  w.cand.resize(n);
  for (int i = 0; i < n; ++i) {
    const int ni = tb.n[i];
    w.est[i].assign(ni, 0);
    w.lst[i].assign(ni, kUnbounded);
    const auto type = P.task(i).type;
    if (!is_fusion(type)) continue;
    const auto& preds = g.preds[i];
    const int edges = static_cast<int>(preds.size());
    int total = 0;
    for (int p : preds) total += tb.n[p];
    w.cand[i].assign(ni, std::vector<std::vector<int>>(edges));
    for (int j = 1; j <= ni; ++j) {
      for (int e = 0; e < edges; ++e) {
        const int ne = tb.n[preds[e]];
        int lo = 1, hi = ne;
        if (type == TaskType::WFusion) {
          lo = j;
          hi = ne - ni + j;
        } else if (type == TaskType::IFusion) {
          lo = std::max(1, j - 1 + edges - (total - ne));
          hi = std::min(ne, j);
        }
        auto& c = w.cand[i][j - 1][e];
        for (int jp = lo; jp <= hi; ++jp) c.push_back(jp);
        if (c.empty()) {
          w.feasible = false;
          w.reason = "no usable predecessor instance for " + inst_name("", P.task(i).id, j);
          return w;
        }
      }
    }
  }

  auto fail = [&w](std::string why) {
    w.feasible = false;
    w.reason = std::move(why);
  };

  // reach[i][j][a]: lowest instance index of ancestor a whose data can reach
  // instance j of i (0 when a is not an ancestor).
  std::vector<std::vector<std::vector<int>>> reach(n);
  for (int i = 0; i < n; ++i) reach[i].assign(tb.n[i], std::vector<int>(n, 0));
  const int cores = std::max(1, P.dag.core_count);
  auto energy_bound = [&](int i, int j) {
    auto& r = reach[i][j];
    std::fill(r.begin(), r.end(), 0);
    const auto& preds = g.preds[i];
    auto merge = [&](int p, int jp) {
      auto lower = [](int& slot, int v) { slot = slot == 0 ? v : std::min(slot, v); };
      lower(r[p], jp);
      for (int a = 0; a < n; ++a) {
        if (reach[p][jp - 1][a] != 0) lower(r[a], reach[p][jp - 1][a]);
      }
    };
    if (P.task(i).type == TaskType::Subscription) {
      merge(preds[0], j + 1);
    } else if (is_fusion(P.task(i).type)) {
      for (std::size_t ed = 0; ed < preds.size(); ++ed) {
        for (int jp : w.cand[i][j][ed]) merge(preds[ed], jp);
      }
    }
    // Every ancestor runs one instance inside [earliest start, s(i, j)].
    std::vector<std::pair<Tick, Tick>> work;
    for (int a = 0; a < n; ++a) {
      if (r[a] != 0) work.push_back({w.est[a][r[a] - 1], P.task(a).wcet});
    }
    std::sort(work.begin(), work.end(), std::greater<>());
    Tick total = 0, bound = 0;
    for (const auto& [from, e] : work) {
      total += e;
      bound = std::max(bound, from + (total + cores - 1) / cores);
    }
    return bound;
  };

  bool changed = true;
  for (int round = 0; changed && round < 100000; ++round) {
    changed = false;
    for (int i : g.topo) {
      const auto& t = P.task(i);
      const Tick e = t.wcet;
      const Tick D = P.deadline(i);
      const int ni = tb.n[i];
      const auto& preds = g.preds[i];
      const bool wfus = t.type == TaskType::WFusion;
      for (int j = 0; j < ni; ++j) {
        Tick lo = w.est[i][j];
        Tick hi = w.lst[i][j];
        if (is_timer(t.type)) {
          lo = std::max(lo, t.period * j);
          hi = std::min(hi, t.period * j + D - e);
        }
        if (j > 0) lo = std::max(lo, w.est[i][j - 1] + e);
        if (j + 1 < ni) hi = std::min(hi, w.lst[i][j + 1] - e);
        if (t.type == TaskType::Subscription) {
          const int p = preds[0];
          const Tick ep = P.task(p).wcet;
          lo = std::max(lo, w.est[p][j] + ep);
          hi = std::min(hi, w.lst[p][j] + ep + D - e);
        }
        if (is_fusion(t.type)) {
          Tick release_hi = 0;
          for (std::size_t ed = 0; ed < preds.size(); ++ed) {
            const int p = preds[ed];
            const Tick ep = P.task(p).wcet;
            auto& c = w.cand[i][j][ed];
            int min_idx = 1, max_idx = tb.n[p];
            if (j > 0 && !w.cand[i][j - 1][ed].empty()) {
              min_idx = w.cand[i][j - 1][ed].front() + (wfus ? 1 : 0);
            }
            if (j + 1 < ni && !w.cand[i][j + 1][ed].empty()) {
              max_idx = w.cand[i][j + 1][ed].back() - (wfus ? 1 : 0);
            }
            const auto before = c.size();
            std::erase_if(c, [&](int jp) {
              return jp < min_idx || jp > max_idx || w.est[p][jp - 1] + ep > hi;
            });
            if (c.size() != before) changed = true;
            if (c.empty()) {
              fail("no usable predecessor instance for " + inst_name("", t.id, j + 1));
              return w;
            }
            lo = std::max(lo, w.est[p][c.front() - 1] + ep);
            release_hi = std::max(release_hi, w.lst[p][c.back() - 1] + ep);
          }
          if (!is_timer(t.type)) hi = std::min(hi, release_hi + D - e);
        }
        if (!preds.empty()) lo = std::max(lo, energy_bound(i, j));
        const int q = tb.phase(i, j + 1);
        if (q >= 3) {
          const int j0 = j - (q - 2) * tb.steady[i];
          const Tick shift = (q - 2) * tb.hp;
          lo = std::max(lo, w.est[i][j0] + shift);
          hi = std::min(hi, w.lst[i][j0] + shift);
          if (w.est[i][j0] < lo - shift) {
            w.est[i][j0] = lo - shift;
            changed = true;
          }
          if (w.lst[i][j0] > hi - shift) {
            w.lst[i][j0] = hi - shift;
            changed = true;
          }
          if (is_fusion(t.type)) {
            for (std::size_t ed = 0; ed < preds.size(); ++ed) {
              const int cs = (q - 2) * tb.steady[preds[ed]];
              auto& c = w.cand[i][j][ed];
              auto& c0 = w.cand[i][j0][ed];
              const auto s1 = c.size(), s0 = c0.size();
              std::erase_if(c, [&](int jp) {
                return !std::binary_search(c0.begin(), c0.end(), jp - cs);
              });
              std::erase_if(c0, [&](int jp) {
                return !std::binary_search(c.begin(), c.end(), jp + cs);
              });
              if (c.size() != s1 || c0.size() != s0) changed = true;
              if (c.empty()) {
                fail("copy of " + inst_name("", t.id, j0 + 1) + " has no usable input");
                return w;
              }
            }
          }
        }
        if (lo > hi) {
          fail("empty start window for " + inst_name("", t.id, j + 1));
          return w;
        }
        if (lo != w.est[i][j] || hi != w.lst[i][j]) {
          w.est[i][j] = lo;
          w.lst[i][j] = hi;
          changed = true;
        }
        if (t.type == TaskType::Subscription) {
          const int p = preds[0];
          const Tick bound = hi - P.task(p).wcet;
          if (w.lst[p][j] > bound) {
            w.lst[p][j] = bound;
            changed = true;
          }
        }
      }
    }
  }
  return w;
}

double IlpModel::used_index(int task, int j, int e, const std::vector<double>& x) const {
  double v = 0.0;
  for (const auto& [jp, lit] : u[task][j][e]) v += jp * lit.eval(x);
  return v;
}

ModelBuilder::ModelBuilder(const Problem& problem, const MetricConfig& metrics,
                           IlpOptions options)
    : p_(problem), metrics_(metrics), opt_(options) {
  m_.windows = compute_windows(p_);
  if (!m_.windows.feasible) {
    m_.lp.trivially_infeasible = true;
    m_.lp.infeasible_reason = m_.windows.reason;
    return;
  }
  Tick max_d = 0;
  for (int i = 0; i < p_.task_count(); ++i) max_d = std::max(max_d, p_.deadline(i));
  const Tick base = std::max(p_.table.delta + max_d + 1, m_.windows.max_finish(p_) + 1);
  M_ = static_cast<double>(base) * opt_.big_m_factor;
  m_.big_m = M_;
  create_variables();
}

std::vector<std::vector<int>> interchangeable_tasks(const Problem& p, const MetricConfig& metrics) {
  const auto& g = p.graph;
  std::set<int> evaluated, wcrt;
  for (int sink : evaluated_sinks(p.dag, g, metrics)) {
    evaluated.insert(sink);
    for (int s : wcrt_sensors_for(p.dag, g, sink, metrics)) wcrt.insert(s);
  }
  auto eligible = [&](int i) {
    if (evaluated.count(i) || g.succs[i].empty()) return false;
    return std::all_of(g.succs[i].begin(), g.succs[i].end(),
                       [&](int k) { return is_fusion(p.task(k).type); });
  };
  auto same = [&](int a, int b) {
    const auto& x = p.task(a);
    const auto& y = p.task(b);
    auto sa = g.succs[a], sb = g.succs[b];
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return x.type == y.type && x.wcet == y.wcet && x.period == y.period &&
           p.deadline(a) == p.deadline(b) && g.preds[a] == g.preds[b] && sa == sb &&
           wcrt.count(a) == wcrt.count(b);
  };
  std::vector<std::vector<int>> classes;
  std::vector<bool> taken(p.task_count(), false);
  for (int a = 0; a < p.task_count(); ++a) {
    if (taken[a] || !eligible(a)) continue;
    std::vector<int> cls{a};
    for (int b = a + 1; b < p.task_count(); ++b) {
      if (!taken[b] && eligible(b) && same(a, b)) {
        cls.push_back(b);
        taken[b] = true;
      }
    }
    if (cls.size() > 1) classes.push_back(std::move(cls));
  }
  return classes;
}

double ModelBuilder::gate(double span) const {
  return std::clamp(span, 0.0, M_ / opt_.big_m_factor) * opt_.big_m_factor;
}

void ModelBuilder::create_variables() {
  const auto& tb = p_.table;
  const int n = p_.task_count();
  const int cores = p_.dag.core_count;
  auto& lp = m_.lp;
  const auto& w = m_.windows;
  m_.s.resize(n);
  m_.f.resize(n);
  m_.y.resize(n);
  m_.u.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& t = p_.task(i);
    for (int j = 0; j < tb.n[i]; ++j) {
      m_.s[i].push_back(lp.add_var(inst_name("s", t.id, j + 1), static_cast<double>(w.est[i][j]),
                                   static_cast<double>(w.lst[i][j]), milp::VarKind::Integer));
      m_.f[i].push_back(lp.add_var(inst_name("f", t.id, j + 1),
                                   static_cast<double>(w.est[i][j] + t.wcet),
                                   static_cast<double>(w.lst[i][j] + t.wcet),
                                   milp::VarKind::Continuous));
      std::vector<int> ys;
      for (int c = 0; c < cores; ++c) {
        ys.push_back(lp.add_binary(inst_name("y", t.id, j + 1) + "_" + std::to_string(c)));
      }
      m_.y[i].push_back(std::move(ys));
    }
    if (!is_fusion(t.type)) continue;
    m_.u[i].resize(tb.n[i]);
    for (int j = 0; j < tb.n[i]; ++j) {
      for (std::size_t e = 0; e < p_.graph.preds[i].size(); ++e) {
        const auto& c = w.cand[i][j][e];
        std::vector<std::pair<int, Lit>> lits;
        for (int jp : c) {
          if (c.size() == 1) {
            lits.emplace_back(jp, Lit::constant(true));
          } else {
            const auto& pid = p_.task(p_.graph.preds[i][e]).id;
            lits.emplace_back(jp, Lit::of(lp.add_binary(inst_name("u", t.id, j + 1) + "_" + pid +
                                                        "_" + std::to_string(jp))));
          }
        }
        m_.u[i][j].push_back(std::move(lits));
      }
    }
  }

  if (opt_.symmetry_breaking && cores > 1) {
    std::vector<int> topo_pos(n);
    for (int k = 0; k < n; ++k) topo_pos[p_.graph.topo[k]] = k;
    std::vector<std::pair<int, int>> order;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < tb.n[i]; ++j) order.emplace_back(i, j);
    }
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
      return std::tuple(w.est[a.first][a.second], topo_pos[a.first], a.second) <
             std::tuple(w.est[b.first][b.second], topo_pos[b.first], b.second);
    });
    for (std::size_t g = 0; g < order.size() && g + 1 < static_cast<std::size_t>(cores); ++g) {
      auto [i, j] = order[g];
      for (int c = static_cast<int>(g) + 1; c < cores; ++c) lp.vars[m_.y[i][j][c]].ub = 0.0;
    }
  }

  // Sensor instances that can reach each instance through candidate inputs.
  possible_.resize(n);
  for (int i : p_.graph.topo) {
    const auto& t = p_.task(i);
    possible_[i].resize(tb.n[i]);
    for (int j = 0; j < tb.n[i]; ++j) {
      auto& out = possible_[i][j];
      if (t.type == TaskType::Sensor) {
        out.emplace_back(i, j + 1);
      } else if (t.type == TaskType::Subscription) {
        out = possible_[p_.graph.preds[i][0]][j];
      } else {
        for (std::size_t e = 0; e < p_.graph.preds[i].size(); ++e) {
          const int p = p_.graph.preds[i][e];
          for (int jp : w.cand[i][j][e]) {
            const auto& src = possible_[p][jp - 1];
            out.insert(out.end(), src.begin(), src.end());
          }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
      }
    }
  }
}

LinExpr ModelBuilder::idx_expr(int i, int j, int e) const {
  LinExpr out;
  for (const auto& [jp, lit] : m_.u[i][j][e]) out += static_cast<double>(jp) * lit.expr();
  return out;
}

void ModelBuilder::build_core_constraints() {
  if (m_.lp.trivially_infeasible) return;
  const auto& tb = p_.table;
  const int n = p_.task_count();
  const int cores = p_.dag.core_count;
  auto& lp = m_.lp;
  const auto& w = m_.windows;

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < tb.n[i]; ++j) {
      LinExpr sum;
      for (int c = 0; c < cores; ++c) sum += ex(m_.y[i][j][c]);
      lp.add(sum, Sense::EQ, 1.0, "assignment");
    }
  }
  if (opt_.symmetry_breaking) {
    for (const auto& cls : interchangeable_tasks(p_, metrics_)) {
      for (std::size_t k = 1; k < cls.size(); ++k) {
        lp.add(ex(m_.s[cls[k - 1]][0]), Sense::LE, ex(m_.s[cls[k]][0]), "symmetry");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < tb.n[i]; ++j) {
      lp.add(ex(m_.f[i][j]) - ex(m_.s[i][j]), Sense::EQ, static_cast<double>(p_.task(i).wcet),
             "finish");
    }
  }

  struct Ref {
    int i, j, phase;
  };
  std::vector<Ref> all;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < tb.n[i]; ++j) all.push_back({i, j, tb.phase(i, j + 1)});
  }
  auto finish_ub = [&](const Ref& r) { return w.lst[r.i][r.j] + p_.task(r.i).wcet; };
  auto implied = [&](const Ref& a, const Ref& b) {
    if (a.i == b.i) return true;
    if (finish_ub(a) <= w.est[b.i][b.j] || finish_ub(b) <= w.est[a.i][a.j]) return true;
    if (a.phase >= 3 && a.phase == b.phase) return true;
    const auto& tb_ = p_.task(b.i);
    if (tb_.type == TaskType::Subscription && p_.graph.preds[b.i][0] == a.i && a.j == b.j) {
      return true;
    }
    const auto& ta = p_.task(a.i);
    if (ta.type == TaskType::Subscription && p_.graph.preds[a.i][0] == b.i && a.j == b.j) {
      return true;
    }
    return false;
  };
  for (std::size_t x = 0; x < all.size(); ++x) {
    for (std::size_t y = x + 1; y < all.size(); ++y) {
      const Ref& a = all[x];
      const Ref& b = all[y];
      if (opt_.prune_overlap && implied(a, b)) continue;
      const int z = lp.add_binary("z_" + p_.task(a.i).id + "_" + std::to_string(a.j + 1) + "_" +
                                  p_.task(b.i).id + "_" + std::to_string(b.j + 1));
      for (int c = 0; c < cores; ++c) {
        const LinExpr apart = LinExpr(2.0) - ex(m_.y[a.i][a.j][c]) - ex(m_.y[b.i][b.j][c]);
        const double mab = gate(lft(a.i, a.j) - est(b.i, b.j));
        const double mba = gate(lft(b.i, b.j) - est(a.i, a.j));
        lp.add(ex(m_.s[b.i][b.j]), Sense::GE,
               ex(m_.f[a.i][a.j]) - mab * apart - mab * (LinExpr(1.0) - ex(z)), "overlap");
        lp.add(ex(m_.s[a.i][a.j]), Sense::GE, ex(m_.f[b.i][b.j]) - mba * apart - mba * ex(z),
               "overlap");
      }
    }
  }

  if (opt_.pin_tasks) {
    for (int i = 0; i < n; ++i) {
      for (int j = 1; j < tb.n[i]; ++j) {
        for (int c = 0; c < cores; ++c) {
          lp.add(ex(m_.y[i][j][c]), Sense::EQ, ex(m_.y[i][0][c]), "pinning");
        }
      }
    }
  }
}

void ModelBuilder::build_trigger_constraints() {
  if (m_.lp.trivially_infeasible) return;
  const auto& tb = p_.table;
  const auto& g = p_.graph;
  auto& lp = m_.lp;
  const int n = p_.task_count();

  for (int i = 0; i < n; ++i) {
    const auto& t = p_.task(i);
    const double D = static_cast<double>(p_.deadline(i));
    for (int j = 0; j < tb.n[i]; ++j) {
      const LinExpr s = ex(m_.s[i][j]);
      const LinExpr f = ex(m_.f[i][j]);
      if (is_timer(t.type)) {
        const double rel = static_cast<double>(t.period * j);
        lp.add(s, Sense::GE, rel, "timer");
        if (j > 0) lp.add(s, Sense::GE, ex(m_.f[i][j - 1]), "timer");
        lp.add(f, Sense::LE, rel + D, "deadline");
        continue;
      }
      if (j > 0) lp.add(s, Sense::GE, ex(m_.f[i][j - 1]), "sequence");
      if (t.type == TaskType::Subscription) {
        const int p = g.preds[i][0];
        lp.add(s, Sense::GE, ex(m_.f[p][j]), "subscription");
        lp.add(f, Sense::LE, ex(m_.f[p][j]) + D, "deadline");
        continue;
      }

      // Event-triggered fusion: the release is the finish of one selected input.
      const int edges = static_cast<int>(g.preds[i].size());
      std::vector<Lit> sel(edges, Lit::constant(true));
      if (edges > 1) {
        LinExpr sum;
        for (int e = 0; e < edges; ++e) {
          sel[e] = Lit::of(lp.add_binary(inst_name("v", t.id, j + 1) + "_" + std::to_string(e)));
          sum += sel[e].expr();
        }
        lp.add(sum, Sense::EQ, 1.0, "deadline");
      }
      const bool first_ifus = t.type == TaskType::IFusion && j == 0;
      for (int e = 0; e < edges; ++e) {
        const int p = g.preds[i][e];
        if (t.type == TaskType::IFusion && j > 0 && edges > 1) {
          lp.add(sel[e].expr(), Sense::LE, idx_expr(i, j, e) - idx_expr(i, j - 1, e), "deadline");
        }
        const LinExpr off_v = LinExpr(1.0) - sel[e].expr();
        auto slack = [&](int jp) { return gate(lft(i, j) - est(p, jp - 1) - p_.task(p).wcet - D); };
        if (first_ifus) {
          lp.add(f, Sense::LE, ex(m_.f[p][0]) + D + slack(1) * off_v, "deadline");
          continue;
        }
        for (const auto& [jp, lit] : m_.u[i][j][e]) {
          const double mm = slack(jp);
          lp.add(f, Sense::LE,
                 ex(m_.f[p][jp - 1]) + D + mm * off_v + mm * (LinExpr(1.0) - lit.expr()), "deadline");
        }
      }
    }
  }
}

void ModelBuilder::build_fusion_constraints() {
  if (m_.lp.trivially_infeasible) return;
  const auto& tb = p_.table;
  const auto& g = p_.graph;
  auto& lp = m_.lp;
  for (int i = 0; i < p_.task_count(); ++i) {
    const auto& t = p_.task(i);
    if (!is_fusion(t.type)) continue;
    const int ni = tb.n[i];
    const int edges = static_cast<int>(g.preds[i].size());
    for (int j = 0; j < ni; ++j) {
      for (int e = 0; e < edges; ++e) {
        const int p = g.preds[i][e];
        LinExpr sum;
        for (const auto& [jp, lit] : m_.u[i][j][e]) {
          lp.add(ex(m_.s[i][j]), Sense::GE,
                 ex(m_.f[p][jp - 1]) - gate(lft(p, jp - 1) - est(i, j)) * (LinExpr(1.0) - lit.expr()),
                 "fusion-start");
          sum += lit.expr();
        }
        lp.add(sum, Sense::EQ, 1.0, "use-once");
        if (j + 1 < ni) {
          lp.add(idx_expr(i, j, e), Sense::LE, idx_expr(i, j + 1, e), "monotone");
        }
      }
      if (t.type == TaskType::IFusion && j + 1 < ni) {
        LinExpr adv;
        for (int e = 0; e < edges; ++e) adv += idx_expr(i, j + 1, e) - idx_expr(i, j, e);
        lp.add(adv, Sense::GE, 1.0, "ifus-fresh");
      }
    }
    if (t.type == TaskType::WFusion) {
      for (int e = 0; e < edges; ++e) {
        std::map<int, LinExpr> column;
        for (int j = 0; j < ni; ++j) {
          for (const auto& [jp, lit] : m_.u[i][j][e]) column[jp] += lit.expr();
        }
        for (const auto& [jp, col] : column) {
          if (col.terms.size() + (col.constant != 0.0 ? 1 : 0) > 1) {
            lp.add(col, Sense::LE, 1.0, "wfus-once");
          }
        }
      }
    }
  }
}

Lit ModelBuilder::provenance(int i, int j, int sensor, int js) {
  const auto& t = p_.task(i);
  if (t.type == TaskType::Sensor) return Lit::constant(i == sensor && j == js);
  if (t.type == TaskType::Subscription) {
    return provenance(p_.producers.producer_of[i], j, sensor, js);
  }
  const auto key = std::tuple(i, j, sensor, js);
  if (auto it = m_.provenance.find(key); it != m_.provenance.end()) return it->second;

  auto& lp = m_.lp;
  const std::pair<int, int> target(sensor, js);
  std::vector<Lit> terms;
  const auto& preds = p_.graph.preds[i];
  for (std::size_t e = 0; e < preds.size(); ++e) {
    const int pred = preds[e];
    const int producer = p_.producers.producer_of[pred];
    for (const auto& [jp, use] : m_.u[i][j - 1][e]) {
      const auto& poss = possible_[pred][jp - 1];
      if (!std::binary_search(poss.begin(), poss.end(), target)) continue;
      const Lit up = provenance(producer, jp, sensor, js);
      if (up.is_false()) continue;
      if (up.is_true()) {
        terms.push_back(use);
      } else if (use.is_true()) {
        terms.push_back(up);
      } else {
        const int w = lp.add_var("w_" + t.id + "_" + std::to_string(j) + "_" +
                                     p_.task(producer).id + "_" + std::to_string(jp) + "_" +
                                     p_.task(sensor).id + "_" + std::to_string(js),
                                 0.0, 1.0, milp::VarKind::Continuous);
        lp.add(ex(w), Sense::LE, use.expr(), "provenance");
        lp.add(ex(w), Sense::LE, up.expr(), "provenance");
        lp.add(ex(w), Sense::GE, use.expr() + up.expr() - 1.0, "provenance");
        terms.push_back(Lit::of(w));
      }
    }
  }
  Lit out;
  if (terms.empty()) {
    out = Lit::constant(false);
  } else if (std::any_of(terms.begin(), terms.end(), [](const Lit& l) { return l.is_true(); })) {
    out = Lit::constant(true);
  } else if (terms.size() == 1) {
    out = terms.front();
  } else {
    out = Lit::of(lp.add_binary("U_" + t.id + "_" + std::to_string(j) + "_" +
                                p_.task(sensor).id + "_" + std::to_string(js)));
    LinExpr sum;
    for (const auto& term : terms) {
      sum += term.expr();
      lp.add(out.expr(), Sense::GE, term.expr(), "provenance");
    }
    lp.add(out.expr(), Sense::LE, sum, "provenance");
  }
  m_.provenance[key] = out;
  return out;
}

namespace {

bool needs_provenance(const MetricConfig& mc) {
  return mc.has(Metric::MRT) || mc.has(Metric::MTD) || mc.has(Metric::PAoI) ||
         mc.has(Metric::WCRT);
}

int first_evaluated(const InstanceTable& tb, int task) { return tb.first_in_phase(task, 2); }

}  // namespace

void ModelBuilder::build_provenance_constraints() {
  if (m_.lp.trivially_infeasible || !needs_provenance(metrics_)) return;
  const auto sinks = evaluated_sinks(p_.dag, p_.graph, metrics_);
  for (int sink : sinks) {
    const int from = std::max(1, first_evaluated(p_.table, sink) - 1);
    for (int j = from; j <= p_.table.n[sink]; ++j) {
      for (const auto& [s, js] : possible_[sink][j - 1]) provenance(sink, j, s, js);
    }
  }
}

void ModelBuilder::build_metric_constraints() {
  if (m_.lp.trivially_infeasible) return;
  const auto& tb = p_.table;
  auto& lp = m_.lp;
  const auto sinks = evaluated_sinks(p_.dag, p_.graph, metrics_);
  const bool want_mrt = metrics_.has(Metric::MRT);
  const bool want_mtd = metrics_.has(Metric::MTD);
  const bool want_paoi = metrics_.has(Metric::PAoI);
  const bool want_wcrt = metrics_.has(Metric::WCRT);
  const bool want_ms = metrics_.has(Metric::MS);
  const double delta = static_cast<double>(tb.delta);
  auto release = [&](int s, int js) { return static_cast<double>(p_.task(s).period * (js - 1)); };

  for (int sink : sinks) {
    const auto& id = p_.task(sink).id;
    SinkMetricVars mv;
    mv.sink = sink;
    const int first = first_evaluated(tb, sink);
    const int last = tb.n[sink];
    auto metric_var = [&](const std::string& name) {
      return lp.add_var(name + "_" + id, 0.0, milp::kInf, milp::VarKind::Continuous);
    };
    auto U = [&](int j, int s, int js) { return provenance(sink, j, s, js); };

    // Lowest and highest possible sample index per sensor for instance j.
    auto reach_bounds = [&](int j) {
      std::pair<std::map<int, int>, std::map<int, int>> b;
      for (const auto& [sen, js] : possible_[sink][j - 1]) {
        auto [it, fresh] = b.first.emplace(sen, js);
        if (!fresh) it->second = std::min(it->second, js);
        auto [it2, fresh2] = b.second.emplace(sen, js);
        if (!fresh2) it2->second = std::max(it2->second, js);
      }
      return b;
    };
    std::map<int, int> ots, nts;
    auto ots_var = [&](int j) {
      if (auto it = ots.find(j); it != ots.end()) return it->second;
      const int v = lp.add_var(inst_name("OTS", id, j), 0.0, delta, milp::VarKind::Continuous);
      for (const auto& [s, js] : possible_[sink][j - 1]) {
        const Lit l = U(j, s, js);
        if (l.is_false()) continue;
        lp.add(ex(v), Sense::LE, release(s, js) + gate(delta - release(s, js)) * (LinExpr(1.0) - l.expr()),
               "metric");
      }
      // Every sensor with a path to the sink contributes at least one sample.
      for (const auto& [sen, hi] : reach_bounds(j).second) {
        lp.add(ex(v), Sense::LE, release(sen, hi), "metric");
      }
      ots[j] = v;
      return v;
    };
    auto nts_var = [&](int j) {
      const int v = lp.add_var(inst_name("NTS", id, j), 0.0, delta, milp::VarKind::Continuous);
      for (const auto& [s, js] : possible_[sink][j - 1]) {
        const Lit l = U(j, s, js);
        if (l.is_false()) continue;
        lp.add(ex(v), Sense::GE, release(s, js) - gate(release(s, js)) * (LinExpr(1.0) - l.expr()),
               "metric");
      }
      for (const auto& [sen, lo] : reach_bounds(j).first) {
        lp.add(ex(v), Sense::GE, release(sen, lo), "metric");
      }
      nts[j] = v;
      return v;
    };

    if (want_mrt) {
      mv.mrt = metric_var("MRT");
      for (int j = std::max(first, 2); j <= last; ++j) {
        lp.add(ex(mv.mrt), Sense::GE, ex(m_.f[sink][j - 1]) - ex(ots_var(j - 1)), "metric");
      }
    }
    if (want_mtd) {
      mv.mtd = metric_var("MTD");
      for (int j = first; j <= last; ++j) {
        lp.add(ex(mv.mtd), Sense::GE, ex(nts_var(j)) - ex(ots_var(j)), "metric");
      }
    }
    if (want_paoi) {
      mv.paoi = metric_var("PAoI");
      for (int j = first; j <= last; ++j) {
        for (const auto& [s, js] : possible_[sink][j - 1]) {
          if (js < 2) continue;
          const Lit l = U(j, s, js);
          if (l.is_false()) continue;
          lp.add(ex(mv.paoi), Sense::GE,
                 ex(m_.s[s][js - 1]) - ex(m_.s[s][js - 2]) -
                     gate(lft(s, js - 1) - p_.task(s).wcet - est(s, js - 2)) *
                         (LinExpr(1.0) - l.expr()),
                 "metric");
        }
      }
    }
    if (want_wcrt) {
      for (int s : wcrt_sensors_for(p_.dag, p_.graph, sink, metrics_)) {
        const int v = lp.add_var("WCRT_" + p_.task(s).id + "_" + id, 0.0, milp::kInf,
                                 milp::VarKind::Continuous);
        mv.wcrt.emplace_back(s, v);
        for (int j = first; j <= last; ++j) {
          const auto hi = reach_bounds(j).second;
          if (auto it = hi.find(s); it != hi.end()) {
            lp.add(ex(v), Sense::GE, ex(m_.f[sink][j - 1]) - release(s, it->second), "metric");
          }
          for (const auto& [s2, js] : possible_[sink][j - 1]) {
            if (s2 != s) continue;
            const Lit l = U(j, s, js);
            if (l.is_false()) continue;
            lp.add(ex(v), Sense::GE,
                   ex(m_.f[sink][j - 1]) - release(s, js) -
                       gate(lft(sink, j - 1) - release(s, js)) * (LinExpr(1.0) - l.expr()),
                   "metric");
          }
        }
      }
    }
    if (want_ms) {
      mv.ms = metric_var("MS");
      for (int j = first; j <= last; ++j) {
        lp.add(ex(mv.ms), Sense::GE, ex(m_.f[sink][j - 1]), "metric");
      }
    }
    m_.metric_vars.push_back(std::move(mv));
  }
}

void ModelBuilder::build_hp_copy_constraints() {
  if (m_.lp.trivially_infeasible) return;
  const auto& tb = p_.table;
  const auto& g = p_.graph;
  auto& lp = m_.lp;
  const int cores = p_.dag.core_count;
  for (int i = 0; i < p_.task_count(); ++i) {
    const auto& t = p_.task(i);
    for (int j = 0; j < tb.n[i]; ++j) {
      const int q = tb.phase(i, j + 1);
      if (q < 3) continue;
      const int j0 = j - (q - 2) * tb.steady[i];
      const double shift = static_cast<double>((q - 2) * tb.hp);
      lp.add(ex(m_.s[i][j]), Sense::EQ, ex(m_.s[i][j0]) + shift, "hp-copy");
      for (int c = 0; c < cores; ++c) {
        lp.add(ex(m_.y[i][j][c]), Sense::EQ, ex(m_.y[i][j0][c]), "hp-copy");
      }
      if (!is_fusion(t.type)) continue;
      for (std::size_t e = 0; e < g.preds[i].size(); ++e) {
        const int cs = (q - 2) * tb.steady[g.preds[i][e]];
        const auto& orig = m_.u[i][j0][e];
        for (const auto& [jp, lit] : m_.u[i][j][e]) {
          auto it = std::find_if(orig.begin(), orig.end(),
                                 [&](const auto& o) { return o.first == jp - cs; });
          lp.add(lit.expr(), Sense::EQ, it == orig.end() ? LinExpr(0.0) : it->second.expr(),
                 "hp-copy");
        }
      }
    }
  }
}

void ModelBuilder::build_objective() {
  if (metrics_.objective.empty()) throw ModelError("objective has no metric");
  std::vector<int> priorities;
  for (const auto& w : metrics_.objective) priorities.push_back(w.priority);
  std::sort(priorities.begin(), priorities.end(), std::greater<>());
  priorities.erase(std::unique(priorities.begin(), priorities.end()), priorities.end());
  for (int prio : priorities) {
    std::vector<MetricWeight> terms;
    LinExpr obj;
    for (const auto& w : metrics_.objective) {
      if (w.priority != prio) continue;
      terms.push_back(w);
      for (const auto& mv : m_.metric_vars) {
        switch (w.metric) {
          case Metric::MRT: obj += w.weight * ex(mv.mrt); break;
          case Metric::MTD: obj += w.weight * ex(mv.mtd); break;
          case Metric::PAoI: obj += w.weight * ex(mv.paoi); break;
          case Metric::MS: obj += w.weight * ex(mv.ms); break;
          case Metric::WCRT:
            for (const auto& [s, v] : mv.wcrt) obj += w.weight * ex(v);
            break;
        }
      }
    }
    obj.normalize();
    m_.lp.levels.push_back(std::move(obj));
    m_.levels.push_back(std::move(terms));
  }
}

IlpModel build_model(const Problem& problem, const MetricConfig& metrics, IlpOptions options) {
  ModelBuilder b(problem, metrics, options);
  b.build_core_constraints();
  b.build_trigger_constraints();
  b.build_fusion_constraints();
  b.build_provenance_constraints();
  b.build_metric_constraints();
  b.build_hp_copy_constraints();
  b.build_objective();
  return b.finish();
}

}  // namespace fusched
