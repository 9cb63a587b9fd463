#include "fusched/pipeline.hpp"

namespace fusched {

DagSpec apply_overrides(DagSpec dag, const RunOptions& opt) {
  if (opt.cores) dag.core_count = *opt.cores;
  if (opt.metrics) dag.metrics = *opt.metrics;
  return dag;
}

CaseResult run_case(const DagSpec& dag, const RunOptions& opt) {
  CaseResult r{make_problem(apply_overrides(dag, opt), opt.delta_multiplier), {}, {}, {}, {}, {}, 0, 0};
  const MetricConfig& mc = r.problem.dag.metrics;
  IlpModel model = build_model(r.problem, mc, opt.ilp);
  r.variables = model.lp.vars.size();
  r.constraints = model.lp.rows.size();
  auto backend = make_backend(opt.backend);
  r.outcome = solve(model.lp, opt.limits, backend.get());
  if (has_solution(r.outcome.status)) {
    r.schedule = extract_schedule(r.outcome, model, r.problem);
    r.check = validate_schedule(*r.schedule, r.problem);
    r.metrics = eval_metrics(*r.schedule, r.problem, mc);
    r.epigraph = epigraph_values(model, r.problem, r.outcome, mc);
  }
  return r;
}

std::vector<std::string> epigraph_mismatches(const MetricsReport& eval, const MetricsReport& epi,
                                             const MetricConfig& mc) {
  std::vector<std::string> out;
  for (const auto& e : eval.sinks) {
    const SinkMetrics* q = epi.find(e.sink);
    if (q == nullptr) {
      out.push_back(e.sink + ": no epigraph values");
      continue;
    }
    auto cmp = [&](Metric m, Tick a, Tick b) {
      if (mc.has(m) && a != b) {
        out.push_back(e.sink + " " + std::string(to_string(m)) + ": evaluated " + std::to_string(a) +
                      ", solver " + std::to_string(b));
      }
    };
    cmp(Metric::MRT, e.mrt, q->mrt);
    cmp(Metric::MTD, e.mtd, q->mtd);
    cmp(Metric::PAoI, e.paoi, q->paoi);
    cmp(Metric::MS, e.ms, q->ms);
    if (mc.has(Metric::WCRT)) {
      for (const auto& [s, v] : e.wcrt) {
        const auto it = q->wcrt.find(s);
        const Tick w = it == q->wcrt.end() ? -1 : it->second;
        if (w != v) {
          out.push_back(e.sink + " WCRT(" + s + "): evaluated " + std::to_string(v) + ", solver " +
                        std::to_string(w));
        }
      }
    }
  }
  return out;
}

}  // namespace fusched
