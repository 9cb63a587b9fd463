#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fusched/gen.hpp"
#include "fusched/pipeline.hpp"

namespace fusched {

/// Writes dag.json, schedule.json, metrics.csv, trace.tsv and gantt.svg
/// (the last four only when a schedule exists) into `dir`.
void write_case_artifacts(const std::filesystem::path& dir, const DagSpec& dag,
                          const CaseResult& result);

struct CaseSummary {
  int index = 0;
  std::uint64_t seed = 0;
  std::string status;             ///< solve status, or "input-error" / "error"
  std::optional<double> runtime;  ///< seconds; absent in reproducible mode
  std::vector<double> objective;  ///< per level
  std::optional<SinkMetrics> metrics;
  bool checked = false;           ///< schedule valid and solver values agree
  std::string message;

  bool feasible() const { return status == "optimal" || status == "feasible-timeout"; }
};

struct CampaignConfig {
  GenConfig gen;                 ///< case k uses seed gen.seed + k
  int count = 100;
  RunOptions run;
  std::filesystem::path out_dir;
  int workers = 1;               ///< 1 runs the serial loop
  bool artifacts = true;         ///< per-case files besides the summary
  bool reproducible = false;     ///< omit wall-clock times from every file
};

struct CampaignResult {
  std::vector<CaseSummary> cases;
  int feasible = 0;
  int resumed = 0;  ///< cases loaded from an earlier run
  double schedulability_ratio() const {
    return cases.empty() ? 0.0 : static_cast<double>(feasible) / static_cast<double>(cases.size());
  }
};

/// Solves one generated case and returns its summary row.
CaseSummary run_campaign_case(const CampaignConfig& config, int index,
                              const std::filesystem::path& case_dir);

/// Generates and solves every case, skipping cases finished by an earlier run
/// with the same manifest. Writes manifest.json, distribution.csv and summary.json.
/// Throws InputError when out_dir holds a manifest for a different campaign.
CampaignResult run_campaign(const CampaignConfig& config);

/// Header: case,seed,status,runtime_s,objective,MRT,MTD,PAoI,WCRT,MS
std::string distribution_csv(const std::vector<CaseSummary>& cases);

}  // namespace fusched
