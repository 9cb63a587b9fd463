#include <benchmark/benchmark.h>
#include <omp.h>

#include <filesystem>
#include <string>

#include "fusched/campaign.hpp"
#include "fusched/ilp_model.hpp"
#include "fusched/presets.hpp"

namespace fs = std::filesystem;
using namespace fusched;

namespace {

CampaignConfig config(int workers) {
  CampaignConfig c;
  c.gen.node_count = 5;
  c.gen.sensor_count = 2;
  c.gen.edge_count = 6;
  c.gen.periods = {10, 20};
  c.gen.seed = 500;
  c.count = 16;
  c.workers = workers;
  c.artifacts = false;
  c.reproducible = true;
  c.run.limits.time_limit = 60;
  c.out_dir = fs::temp_directory_path() / ("fusched_bench_" + std::to_string(workers));
  return c;
}

void BM_Campaign(benchmark::State& state) {
  const CampaignConfig c = config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    fs::remove_all(c.out_dir);
    const CampaignResult r = run_campaign(c);
    benchmark::DoNotOptimize(r.feasible);
  }
  fs::remove_all(c.out_dir);
  state.counters["cases/s"] =
      benchmark::Counter(static_cast<double>(c.count), benchmark::Counter::kIsIterationInvariantRate);
}

void BM_BuildModel(benchmark::State& state) {
  const Problem p = make_problem(make_preset("navigation:m=" + std::to_string(state.range(0))));
  for (auto _ : state) {
    IlpModel m = build_model(p, p.dag.metrics);
    benchmark::DoNotOptimize(m.lp.rows.size());
  }
}

}  // namespace

BENCHMARK(BM_Campaign)->Arg(1)->Arg(omp_get_max_threads() > 1 ? omp_get_max_threads() : 2)
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BuildModel)->DenseRange(2, 10, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
