#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyfield/config.hpp"
#include "levyfield/normality.hpp"

namespace levyfield {

/// Per-replicate rows plus the theory comparison of one experiment.
struct CLTReport {
  std::string experiment;
  std::vector<std::string> columns;           ///< statistic column names
  std::vector<std::vector<double>> statistics; ///< one row per replicate (NaN if degenerate)
  std::vector<bool> degenerate;
  std::vector<NormalitySummary> marginals;    ///< one per column
  std::vector<std::vector<double>> empirical_cov;
  std::vector<std::vector<double>> v_theory;  ///< per column pair (1 x 1 for scalar statistics)
  double tail_bound = 0.0;
  bool truncation_dominated = false;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
  nlohmann::json details = nlohmann::json::object();
  nlohmann::json config;
  std::uint64_t root_seed = 0;

  std::size_t replicates() const noexcept { return statistics.size(); }
};

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; fn must only write to slot i of its output.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

CLTReport run_mean_clt(const ExperimentConfig& config);
CLTReport run_acov_clt(const ExperimentConfig& config);
CLTReport run_spde(const ExperimentConfig& config);
CLTReport run_diag(const ExperimentConfig& config);
CLTReport run_experiment(const ExperimentConfig& config);

nlohmann::json summary_json(const CLTReport& report);
/// replicate_index, statistic columns..., degenerate_flag
std::string replicates_csv(const CLTReport& report);
/// Writes replicates.csv and summary.json (plus any extra tables in details["tables"]).
void write_report(const CLTReport& report, const std::filesystem::path& dir);

}  // namespace levyfield
